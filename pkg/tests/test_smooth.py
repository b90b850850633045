import random

from skewsmooth.ncalg import make_spec
from skewsmooth.pbw import is_pbw
from skewsmooth.smooth import (
    Obstruction,
    SmoothnessKind,
    TABLE_PRESET_IDS,
    UnknownPreset,
    classify,
    preset,
    preset_ids,
    presets,
    smoothness_conditions,
    smoothness_obstruction,
    table1,
    verify_construction,
)

from helpers import SEED, random_spec

STAGE_NAMES = (
    "pbw",
    "obstructions",
    "automorphisms",
    "commutation",
    "differential",
    "d_squared",
    "connectedness",
    "integrability",
)

SMOOTH_IDS = ("1", "2ii", "2iv", "2v", "2vi", "3ii", "5iii", "5v")
NONSMOOTH_IDS = ("2i", "2iii", "3i", "4", "5i", "5ii", "5iv")


def test_preset_catalogue_shape():
    assert preset_ids() == TABLE_PRESET_IDS + ("4b",)
    assert len(TABLE_PRESET_IDS) == 15
    expects = [p.expect_smooth for p in presets()]
    assert expects.count(True) == 8
    assert expects.count(False) == 7
    assert expects.count(None) == 1
    for pid in SMOOTH_IDS:
        assert preset(pid).expect_smooth is True
    for pid in NONSMOOTH_IDS:
        assert preset(pid).expect_smooth is False
    assert preset("4b").expect_smooth is None


def test_unknown_preset_raises():
    try:
        preset("nope")
    except UnknownPreset as e:
        assert e.preset_id == "nope"
        assert isinstance(e, ValueError)
    else:
        assert False, "UnknownPreset not raised"


def test_condition_ids_and_order():
    conds = smoothness_conditions(make_spec(1, 1, 1))
    assert [c.id for c in conds] == [f"S{k}" for k in range(1, 11)]
    assert len(conds[0].exprs) == 3


def test_conditions_hold_on_smooth_presets():
    for pid in SMOOTH_IDS:
        conds = smoothness_conditions(preset(pid).spec)
        assert all(c.holds for c in conds), pid


def test_first_condition_fails_on_nonsmooth_presets():
    for pid in NONSMOOTH_IDS:
        conds = smoothness_conditions(preset(pid).spec)
        assert not conds[0].holds, pid


def test_obstruction_per_preset():
    assert smoothness_obstruction(preset("4").spec) == Obstruction(
        "a_lambda", True
    )
    assert smoothness_obstruction(preset("5i").spec) == Obstruction(
        "a_lambda", False
    )
    assert smoothness_obstruction(preset("5ii").spec) == Obstruction("c_nu", False)
    for pid in ("2i", "2iii", "3i", "5iv"):
        assert smoothness_obstruction(preset(pid).spec) == Obstruction(
            "b_mu", False
        ), pid
    for pid in SMOOTH_IDS:
        assert smoothness_obstruction(preset(pid).spec) is None, pid


def test_full_verification_on_a_smooth_preset():
    v = verify_construction(
        preset("5v").spec, max_degree=2, seed=SEED, leibniz_pairs=5, dd_degree=3
    )
    assert v.kind is SmoothnessKind.SMOOTH_VERIFIED
    assert v.failed_stage is None
    assert tuple(st.name for st in v.stages) == STAGE_NAMES
    assert all(st.ok for st in v.stages)
    assert all(st.detail == "" for st in v.stages)


def test_nonsmooth_presets_stop_at_the_obstruction_stage():
    for pid in NONSMOOTH_IDS:
        p = preset(pid)
        v = verify_construction(p.spec, max_degree=1, leibniz_pairs=1)
        assert v.failed_stage == "obstructions", pid
        assert tuple(st.name for st in v.stages) == ("pbw", "obstructions")
        assert v.stages[0].ok and not v.stages[1].ok
        field = smoothness_obstruction(p.spec).field
        assert field in v.stages[1].detail, pid
        if pid == "4":
            assert v.kind is SmoothnessKind.NOT_SMOOTH_GENERIC
        else:
            assert v.kind is SmoothnessKind.NOT_SMOOTH, pid


def test_screens_pass_but_twists_break_a_relation():
    p = preset("4b")
    v = verify_construction(p.spec, max_degree=1, leibniz_pairs=1)
    assert v.kind is SmoothnessKind.UNDETERMINED
    assert v.failed_stage == "automorphisms"
    assert "nu_x" in v.stages[-1].detail


def test_all_conditions_hold_but_straightening_fails():
    # One scale unequal to the others with a single off-diagonal shift:
    # every sufficient condition vanishes, yet the basis check fails, so
    # the pipeline must stop at the first stage without a verdict.
    s = make_spec(2, 1, 1, a_mu=1)
    assert all(c.holds for c in smoothness_conditions(s))
    assert not is_pbw(s)
    v = verify_construction(s, max_degree=1, leibniz_pairs=1)
    assert v.kind is SmoothnessKind.UNDETERMINED
    assert v.failed_stage == "pbw"


def test_table_report_structure_and_agreement():
    rep = table1(max_degree=2, seed=SEED)
    assert rep.max_degree == 2
    assert tuple(r.preset_id for r in rep.rows) == TABLE_PRESET_IDS
    assert rep.all_match
    for r in rep.rows:
        assert r.match
        if r.expect_smooth:
            assert r.kind is SmoothnessKind.SMOOTH_VERIFIED
            assert r.failed_stage is None
        else:
            assert r.failed_stage == "obstructions"
            if r.preset_id == "4":
                assert r.kind is SmoothnessKind.NOT_SMOOTH_GENERIC
            else:
                assert r.kind is SmoothnessKind.NOT_SMOOTH


def test_classify_agrees_with_the_full_run():
    v1 = classify(preset("2iv").spec, max_degree=1)
    v2 = verify_construction(preset("2iv").spec, max_degree=1)
    assert v1.kind is v2.kind
    assert v1.failed_stage == v2.failed_stage


def test_verdict_invariants_on_random_specs():
    rng = random.Random(SEED + 2)
    for _ in range(12):
        s = random_spec(rng)
        v = verify_construction(s, max_degree=1, leibniz_pairs=2, dd_degree=1)
        names = tuple(st.name for st in v.stages)
        assert names == STAGE_NAMES[: len(names)]
        if v.kind is SmoothnessKind.SMOOTH_VERIFIED:
            assert v.failed_stage is None
            assert all(st.ok for st in v.stages)
        else:
            assert v.failed_stage == v.stages[-1].name
            assert not v.stages[-1].ok
            assert all(st.ok for st in v.stages[:-1])
        if v.kind in (
            SmoothnessKind.NOT_SMOOTH,
            SmoothnessKind.NOT_SMOOTH_GENERIC,
        ):
            assert v.failed_stage == "obstructions"
