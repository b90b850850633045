"""Differential smoothness: staged verification and the preset catalogue.

A spec is classified by running machine checks in a fixed order.  Two
cheap algebraic screens come first (straightening conditions, then the
three coefficients whose non-vanishing rules smoothness out).  If both
pass, the candidate calculus is built and verified wholesale: the twists
must respect the relations and commute, the two routes to the
differential must agree, d must square to zero, only constants may be
closed, and the integral-form identities must reconstruct every form.
A run that clears every stage certifies smoothness; a failure after the
screens leaves the spec undetermined rather than claiming a disproof.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Optional

from .calculus import (
    ConnectednessReport,
    IntegrabilityReport,
    basis_form,
    build_automorphisms,
    connectedness_check,
    d_closed,
    d_leibniz,
    d_on_forms,
    endo_is_homomorphism,
    endos_commute,
    form_rmul,
    integrability_check,
    left_act,
)
from .calculus import _monomials_up_to
from .coeffs import RationalFn, param
from .ncalg import AlgebraSpec, NCPoly, make_spec, nc_mul, random_ncpoly, validate_spec
from .pbw import is_pbw

__all__ = [
    "ConditionResult",
    "Obstruction",
    "Preset",
    "SmoothnessKind",
    "SmoothnessVerdict",
    "StageResult",
    "TABLE_PRESET_IDS",
    "Table1Report",
    "Table1Row",
    "UnknownPreset",
    "classify",
    "preset",
    "preset_ids",
    "presets",
    "smoothness_conditions",
    "smoothness_obstruction",
    "table1",
    "verify_construction",
]


class SmoothnessKind(enum.Enum):
    SMOOTH_VERIFIED = "smooth_verified"
    NOT_SMOOTH = "not_smooth"
    NOT_SMOOTH_GENERIC = "not_smooth_generic"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class StageResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class SmoothnessVerdict:
    kind: SmoothnessKind
    stages: tuple
    failed_stage: Optional[str]


@dataclass(frozen=True)
class ConditionResult:
    id: str
    exprs: tuple
    holds: bool


def _cond(cid: str, *exprs: RationalFn) -> ConditionResult:
    return ConditionResult(cid, exprs, all(e.is_zero for e in exprs))


def smoothness_conditions(s: AlgebraSpec) -> list:
    """The ten sufficient conditions under which the construction goes through.

    Each is a tuple of expressions required to vanish; S1 collects the
    three coefficients that must be absent outright.
    """
    validate_spec(s)
    al, be, ga = s.alpha, s.beta, s.gamma
    return [
        _cond("S1", s.a_lambda, s.b_mu, s.c_nu),
        _cond("S2", s.c_mu * (be - 1)),
        _cond("S3", s.a_mu * s.c_mu),
        _cond("S4", s.b_nu * (be - 1)),
        _cond("S5", s.d_nu * (ga - be.inv()) - s.a_nu * s.b_nu),
        _cond("S6", s.d_lambda * (al - 1) - s.c_lambda * s.b_lambda),
        _cond("S7", s.d_nu * (ga - 1) - s.a_nu * s.b_nu),
        _cond("S8", s.b_lambda * (be - 1)),
        _cond("S9", s.d_lambda * (al * be - 1) - s.b_lambda * s.c_lambda),
        _cond("S10", s.a_mu * (be - 1)),
    ]


@dataclass(frozen=True)
class Obstruction:
    """A coefficient whose presence rules smoothness out.

    generic is False when the coefficient is a nonzero constant (the
    verdict holds outright) and True when it is a parameter expression
    (nonzero off a hypersurface of parameter values).
    """

    field: str
    generic: bool


def smoothness_obstruction(s: AlgebraSpec) -> Optional[Obstruction]:
    validate_spec(s)
    for name in ("a_lambda", "b_mu", "c_nu"):
        v = getattr(s, name)
        if not v.is_zero:
            return Obstruction(name, not v.is_constant)
    return None


def verify_construction(
    s: AlgebraSpec,
    max_degree: int = 4,
    seed: int = 0,
    leibniz_pairs: int = 100,
    dd_degree: int = 6,
) -> SmoothnessVerdict:
    """Run the full staged verification and return the verdict with a log."""
    validate_spec(s)
    stages: list = []

    def failed(kind: SmoothnessKind) -> SmoothnessVerdict:
        return SmoothnessVerdict(kind, tuple(stages), stages[-1].name)

    ok = is_pbw(s)
    stages.append(
        StageResult("pbw", ok, "" if ok else "a straightening condition fails")
    )
    if not ok:
        return failed(SmoothnessKind.UNDETERMINED)

    obs = smoothness_obstruction(s)
    stages.append(
        StageResult(
            "obstructions",
            obs is None,
            "" if obs is None else f"{obs.field} is nonzero",
        )
    )
    if obs is not None:
        kind = (
            SmoothnessKind.NOT_SMOOTH_GENERIC
            if obs.generic
            else SmoothnessKind.NOT_SMOOTH
        )
        return failed(kind)

    t = build_automorphisms(s)
    twists = (("nu_x", t.nu_x), ("nu_y", t.nu_y), ("nu_z", t.nu_z))
    bad = [name for name, e in twists if not endo_is_homomorphism(s, e)]
    stages.append(
        StageResult(
            "automorphisms",
            not bad,
            "" if not bad else "not relation-preserving: " + ", ".join(bad),
        )
    )
    if bad:
        return failed(SmoothnessKind.UNDETERMINED)

    bad = [
        f"{n1}/{n2}"
        for (n1, e1), (n2, e2) in (
            (twists[0], twists[1]),
            (twists[0], twists[2]),
            (twists[1], twists[2]),
        )
        if not endos_commute(s, e1, e2)
    ]
    stages.append(
        StageResult(
            "commutation",
            not bad,
            "" if not bad else "non-commuting pairs: " + ", ".join(bad),
        )
    )
    if bad:
        return failed(SmoothnessKind.UNDETERMINED)

    detail = ""
    for m in _monomials_up_to(max_degree):
        p = NCPoly.monomial(*m)
        if d_closed(s, p) != d_leibniz(s, t, p):
            detail = f"route mismatch on x^{m.i} y^{m.j} z^{m.l}"
            break
    if not detail:
        rng = random.Random(seed)
        for k in range(leibniz_pairs):
            a = random_ncpoly(rng, 3, 3)
            b = random_ncpoly(rng, 3, 3)
            lhs = d_closed(s, nc_mul(s, a, b))
            rhs = form_rmul(s, d_closed(s, a), b) + left_act(s, t, a, d_closed(s, b))
            if lhs != rhs:
                detail = f"product rule fails on seeded pair {k}"
                break
    stages.append(StageResult("differential", not detail, detail))
    if detail:
        return failed(SmoothnessKind.UNDETERMINED)

    detail = ""
    for m in _monomials_up_to(dd_degree):
        if not d_on_forms(s, t, d_closed(s, NCPoly.monomial(*m))).is_zero:
            detail = f"d.d != 0 on x^{m.i} y^{m.j} z^{m.l}"
            break
    if not detail:
        for i in range(3):
            for m in _monomials_up_to(dd_degree):
                w = basis_form(1, i, NCPoly.monomial(*m))
                if not d_on_forms(s, t, d_on_forms(s, t, w)).is_zero:
                    detail = f"d.d != 0 on a degree-1 form (basis {i})"
                    break
            if detail:
                break
    stages.append(StageResult("d_squared", not detail, detail))
    if detail:
        return failed(SmoothnessKind.UNDETERMINED)

    conn = connectedness_check(s, max_degree)
    stages.append(
        StageResult(
            "connectedness",
            conn.connected,
            "" if conn.connected else f"kernel dimension {conn.kernel_dim}",
        )
    )
    if not conn.connected:
        return failed(SmoothnessKind.UNDETERMINED)

    integ = integrability_check(s, t, max_degree)
    stages.append(
        StageResult(
            "integrability",
            integ.ok,
            "" if integ.ok else f"identity fails at {integ.failure}",
        )
    )
    if not integ.ok:
        return failed(SmoothnessKind.UNDETERMINED)

    return SmoothnessVerdict(SmoothnessKind.SMOOTH_VERIFIED, tuple(stages), None)


def classify(s: AlgebraSpec, max_degree: int = 4, seed: int = 0) -> SmoothnessVerdict:
    """Classify a spec: a thin front for verify_construction."""
    return verify_construction(s, max_degree=max_degree, seed=seed)


class UnknownPreset(ValueError):
    def __init__(self, preset_id: str):
        super().__init__(f"unknown preset: {preset_id!r}")
        self.preset_id = preset_id


@dataclass(frozen=True)
class Preset:
    """A named spec from the classification table (plus one extra demo)."""

    id: str
    spec: AlgebraSpec
    expect_smooth: Optional[bool]
    note: str = ""


def _build_presets() -> tuple:
    alpha, beta, gamma = param("alpha"), param("beta"), param("gamma")
    a, b = param("a"), param("b")
    a1, b1 = param("a1"), param("b1")
    a2, b2 = param("a2"), param("b2")
    a3, b3 = param("a3"), param("b3")
    rows = [
        Preset(
            "1",
            make_spec(alpha, beta, gamma),
            True,
            "three independent scale parameters, no lower-order terms",
        ),
        Preset(
            "2i",
            make_spec(1, beta, 1, c_lambda=1, b_mu=1, a_nu=1),
            False,
            "",
        ),
        Preset(
            "2ii",
            make_spec(1, beta, 1, c_lambda=1, d_mu=b, a_nu=1),
            True,
            "",
        ),
        Preset("2iii", make_spec(1, beta, 1, b_mu=1), False, ""),
        Preset("2iv", make_spec(1, beta, 1, d_mu=b), True, ""),
        Preset("2v", make_spec(1, beta, 1, c_lambda=a, a_nu=1), True, ""),
        Preset("2vi", make_spec(1, beta, 1, c_lambda=1), True, ""),
        Preset(
            "3i",
            make_spec(alpha, beta, alpha, b_mu=1, d_mu=b),
            False,
            "",
        ),
        Preset("3ii", make_spec(alpha, beta, alpha, d_mu=b), True, ""),
        Preset(
            "4",
            make_spec(
                alpha,
                alpha,
                alpha,
                a_lambda=a1,
                d_lambda=b1,
                b_mu=a2,
                d_mu=b2,
                c_nu=a3,
                d_nu=b3,
            ),
            False,
            "equal scales with paired free coefficients in every relation",
        ),
        Preset("5i", make_spec(1, 1, 1, a_lambda=1, b_mu=1, c_nu=1), False, ""),
        Preset("5ii", make_spec(1, 1, 1, c_nu=1), False, ""),
        Preset("5iii", make_spec(1, 1, 1, d_nu=b), True, ""),
        Preset(
            "5iv",
            make_spec(1, 1, 1, b_lambda=-1, a_mu=1, b_mu=1),
            False,
            "",
        ),
        Preset("5v", make_spec(1, 1, 1, c_lambda=a, c_mu=1), True, ""),
        Preset(
            "4b",
            make_spec(
                alpha, alpha, alpha, d_lambda=b1, d_mu=b2, d_nu=b3
            ),
            None,
            "screens pass but the candidate twists break a relation; "
            "the pipeline reports undetermined",
        ),
    ]
    return tuple(rows)


_PRESETS = _build_presets()
_PRESET_INDEX = {p.id: p for p in _PRESETS}

TABLE_PRESET_IDS = tuple(p.id for p in _PRESETS if p.id != "4b")


def presets() -> tuple:
    return _PRESETS


def preset_ids() -> tuple:
    return tuple(p.id for p in _PRESETS)


def preset(preset_id: str) -> Preset:
    try:
        return _PRESET_INDEX[preset_id]
    except KeyError:
        raise UnknownPreset(preset_id) from None


@dataclass(frozen=True)
class Table1Row:
    preset_id: str
    expect_smooth: Optional[bool]
    kind: SmoothnessKind
    match: bool
    failed_stage: Optional[str]


@dataclass(frozen=True)
class Table1Report:
    max_degree: int
    rows: tuple
    all_match: bool


def _matches(kind: SmoothnessKind, expect_smooth: Optional[bool]) -> bool:
    if expect_smooth is None:
        return True
    if expect_smooth:
        return kind is SmoothnessKind.SMOOTH_VERIFIED
    return kind in (SmoothnessKind.NOT_SMOOTH, SmoothnessKind.NOT_SMOOTH_GENERIC)


def table1(max_degree: int = 4, seed: int = 0) -> Table1Report:
    """Classify every table preset and compare with the expected column."""
    rows = []
    for pid in TABLE_PRESET_IDS:
        p = preset(pid)
        verdict = classify(p.spec, max_degree=max_degree, seed=seed)
        rows.append(
            Table1Row(
                preset_id=pid,
                expect_smooth=p.expect_smooth,
                kind=verdict.kind,
                match=_matches(verdict.kind, p.expect_smooth),
                failed_stage=verdict.failed_stage,
            )
        )
    return Table1Report(
        max_degree=max_degree,
        rows=tuple(rows),
        all_match=all(r.match for r in rows),
    )
