import json
import random
from fractions import Fraction

from skewsmooth.cli import (
    BinOp,
    ExprEvalError,
    ExprSyntaxError,
    Name,
    Neg,
    Num,
    Pow,
    SpecParseError,
    eval_coeff_expr,
    eval_ring_expr,
    format_multipoly,
    format_ncpoly,
    format_ratfn,
    parse_expr_text,
    parse_spec_file,
    render_spec,
    run,
)
from skewsmooth.coeffs import DivisionByZero, param, rf
from skewsmooth.ncalg import FIELD_NAMES, InvalidSpec, NCPoly, make_spec, nc_mul
from skewsmooth.smooth import preset, preset_ids, presets

from helpers import SEED, random_normal_form, random_ratfn

CALCULUS_KEYS = [
    "max_degree",
    "seed",
    "automorphisms_ok",
    "commutation_ok",
    "dd_zero",
    "leibniz_ok",
    "oracle_match",
    "connected",
    "integrable",
]


def write_spec(tmp_path, text, name="ring.spec"):
    f = tmp_path / name
    f.write_text(text)
    return str(f)


SAMPLE_NOT_PBW = "alpha = 1\nbeta = 2\ngamma = 1\na_lambda = 1\n"
SCALES_ONLY = "alpha = 2\nbeta = 3\ngamma = 5\n"
SMOOTH_FILE = "alpha = 1\nbeta = 7\ngamma = 1\nd_mu = 4\n"
FIVE_I = "alpha = 1\nbeta = 1\ngamma = 1\na_lambda = 1\nb_mu = 1\nc_nu = 1\n"


# ---------------------------------------------------------------------------
# expression parsing


def test_tree_shapes_and_precedence():
    assert parse_expr_text("x + 2*y") == BinOp(
        "+", Name("x"), BinOp("*", Num(2), Name("y"))
    )
    assert parse_expr_text("x - y - z") == BinOp(
        "-", BinOp("-", Name("x"), Name("y")), Name("z")
    )
    assert parse_expr_text("x*y^2") == BinOp("*", Name("x"), Pow(Name("y"), 2))
    assert parse_expr_text("-x^2") == Neg(Pow(Name("x"), 2))
    assert parse_expr_text("(x + y)*z") == BinOp(
        "*", BinOp("+", Name("x"), Name("y")), Name("z")
    )


def test_juxtaposed_generators_get_a_hint():
    try:
        parse_expr_text("xy")
    except ExprSyntaxError as e:
        assert "x*y" in str(e)
        assert e.line == 1 and e.col == 1
    else:
        assert False, "no syntax error"
    try:
        parse_expr_text("x + xyz")
    except ExprSyntaxError as e:
        assert "x*y*z" in str(e)
        assert e.col == 5
    else:
        assert False, "no syntax error"


def test_uppercase_names_are_rejected():
    try:
        parse_expr_text("Q + 1")
    except ExprSyntaxError as e:
        assert "lowercase" in str(e)
    else:
        assert False, "no syntax error"


def test_syntax_error_positions():
    for text, line, col in (("x +", 1, 4), ("1 +\n* 2", 2, 1), ("x^y", 1, 3)):
        try:
            parse_expr_text(text)
        except ExprSyntaxError as e:
            assert (e.line, e.col) == (line, col), text
        else:
            assert False, text
    try:
        parse_expr_text("2 x")
    except ExprSyntaxError:
        pass
    else:
        assert False, "implicit product accepted"


# ---------------------------------------------------------------------------
# evaluation


def test_ring_evaluation_straightens():
    s = make_spec(2, 3, 5)
    e = eval_ring_expr(parse_expr_text("z*y*x"), s)
    assert e == NCPoly.monomial(1, 1, 1, rf(Fraction(3, 10)))
    assert eval_ring_expr(parse_expr_text("x + 0"), s) == NCPoly.gen(0)
    sq = eval_ring_expr(parse_expr_text("(x + 1)^2"), s)
    assert sq == NCPoly.monomial(2, 0, 0) + NCPoly.monomial(1, 0, 0, rf(2)) + NCPoly.constant(rf(1))
    assert eval_ring_expr(parse_expr_text("x - -y"), s) == NCPoly.gen(0) + NCPoly.gen(1)
    assert eval_ring_expr(parse_expr_text("x/2"), s) == NCPoly.monomial(
        1, 0, 0, rf(Fraction(1, 2))
    )


def test_ring_evaluation_on_the_triple_overlap_preset():
    s = preset("5i").spec
    yx = eval_ring_expr(parse_expr_text("y*x"), s)
    assert yx == nc_mul(s, NCPoly.gen(1), NCPoly.gen(0))
    assert format_ncpoly(yx) == "x*y - z"
    zyx = eval_ring_expr(parse_expr_text("z*y*x"), s)
    assert format_ncpoly(zyx) == "x*y*z - x^2 + y^2 - z^2"


def test_ring_division_is_by_constants_only():
    s = make_spec(1, 1, 1)
    coeff = eval_ring_expr(parse_expr_text("x/b"), s)
    assert coeff == NCPoly.monomial(1, 0, 0, rf(param("b")).inv())
    try:
        eval_ring_expr(parse_expr_text("x/y"), s)
    except ExprEvalError:
        pass
    else:
        assert False, "division by a generator accepted"


def test_coefficient_evaluation():
    assert eval_coeff_expr(parse_expr_text("3/2")) == rf(Fraction(3, 2))
    a = rf(param("a"))
    assert eval_coeff_expr(parse_expr_text("a^2 - 1/2")) == a * a - rf(Fraction(1, 2))
    assert eval_coeff_expr(parse_expr_text("-2^2")) == rf(-4)
    try:
        eval_coeff_expr(parse_expr_text("x + 1"))
    except ExprEvalError as e:
        assert "generator" in str(e)
    else:
        assert False, "generator accepted in coefficient"
    try:
        eval_coeff_expr(parse_expr_text("1/(2 - 2)"))
    except DivisionByZero:
        pass
    else:
        assert False, "division by zero accepted"


# ---------------------------------------------------------------------------
# spec files


def test_spec_file_with_comments_and_defaults():
    text = (
        "# a three-generator ring\n"
        "alpha = 1\n"
        "beta = q   # symbolic scale\n"
        "\n"
        "gamma = 1\n"
        "c_lambda = 1\n"
        "d_mu = b\n"
        "a_nu = 1\n"
    )
    s = parse_spec_file(text)
    assert s == make_spec(1, param("q"), 1, c_lambda=1, d_mu=param("b"), a_nu=1)
    assert s.a_lambda.is_zero and s.d_nu.is_zero


def test_spec_file_errors():
    cases = (
        ("alpha = 1\nbeta = 1\n", None, "gamma"),
        ("alpha = 1\nzeta = 1\n", 2, "unknown"),
        ("alpha = 1\nbeta = 1\nbeta = 2\ngamma = 1\n", 3, "duplicate"),
        ("alpha 1\n", 1, "name = expression"),
        ("alpha = 1\nbeta = xy\ngamma = 1\n", 2, "x*y"),
        ("alpha = 1\nbeta = x\ngamma = 1\n", 2, "generator"),
    )
    for text, line, needle in cases:
        try:
            parse_spec_file(text)
        except SpecParseError as e:
            assert e.line == line, text
            assert needle in str(e), text
        else:
            assert False, text
    try:
        parse_spec_file("alpha = 0\nbeta = 1\ngamma = 1\n")
    except InvalidSpec:
        pass
    else:
        assert False, "zero scale accepted"


def test_render_round_trips_every_preset():
    for p in presets():
        assert parse_spec_file(render_spec(p.spec)) == p.spec, p.id
    assert render_spec(make_spec(1, 2, 3)) == "alpha = 1\nbeta = 2\ngamma = 3\n"


# ---------------------------------------------------------------------------
# canonical printing


def test_format_ncpoly_goldens():
    assert format_ncpoly(NCPoly.zero()) == "0"
    assert format_ncpoly(-NCPoly.gen(0)) == "-x"
    assert format_ncpoly(NCPoly.gen(0) - NCPoly.gen(1)) == "x - y"
    a1 = rf(param("a")) + rf(1)
    assert format_ncpoly(NCPoly.monomial(1, 0, 0, a1)) == "(a + 1)*x"
    assert format_ncpoly(NCPoly.constant(a1)) == "a + 1"
    assert format_ncpoly(NCPoly.gen(0) + NCPoly.constant(a1)) == "x + (a + 1)"
    s = make_spec(param("alpha"), param("beta"), param("gamma"))
    zyx = eval_ring_expr(parse_expr_text("z*y*x"), s)
    assert format_ncpoly(zyx) == "beta/(alpha*gamma)*x*y*z"


def test_format_ratfn_and_multipoly_goldens():
    a, b = param("a"), param("b")
    assert format_ratfn(rf(Fraction(3, 2))) == "3/2"
    assert format_ratfn(a * b.inv()) == "a/(b)"
    # denominators are normalized monic
    assert format_ratfn((a + rf(1)) * (b * 2).inv()) == "(1/2*a + 1/2)/(b)"
    assert format_multipoly(rf(0).num) == "0"
    assert format_multipoly((a * a * b * 2 - b - rf(3)).num) == "2*a^2*b - b - 3"


def test_printed_normal_forms_reparse():
    rng = random.Random(SEED + 3)
    s = make_spec(2, 3, 5)
    for _ in range(50):
        p = random_normal_form(rng)
        assert eval_ring_expr(parse_expr_text(format_ncpoly(p)), s) == p
    for _ in range(50):
        r = random_ratfn(rng)
        assert eval_coeff_expr(parse_expr_text(format_ratfn(r))) == r


# ---------------------------------------------------------------------------
# the command line


def test_reduce_command(tmp_path, capsys):
    f = write_spec(tmp_path, SCALES_ONLY)
    assert run(["reduce", "--spec", f, "z*y*x"]) == 0
    assert capsys.readouterr().out == "3/10*x*y*z\n"


def test_reduce_json_placements_agree(tmp_path, capsys):
    f = write_spec(tmp_path, SCALES_ONLY)
    outs = []
    for argv in (
        ["--json", "reduce", "--spec", f, "z*y*x"],
        ["reduce", "--json", "--spec", f, "z*y*x"],
        ["reduce", "--spec", f, "z*y*x", "--json"],
    ):
        assert run(argv) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] == outs[2]
    payload = json.loads(outs[0])
    assert list(payload) == ["spec", "normal_form"]
    assert list(payload["spec"]) == list(FIELD_NAMES)
    assert payload["normal_form"] == "3/10*x*y*z"


def test_reduce_error_exits(tmp_path, capsys):
    f = write_spec(tmp_path, SCALES_ONLY)
    assert run(["reduce", "--spec", f, "xy"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:") and "x*y" in err
    assert run(["reduce", "--spec", str(tmp_path / "missing.spec"), "x"]) == 2
    assert capsys.readouterr().err.startswith("error:")
    bad = write_spec(tmp_path, "alpha = 0\nbeta = 1\ngamma = 1\n", "bad.spec")
    assert run(["reduce", "--spec", bad, "x"]) == 2


def test_check_pbw_command(tmp_path, capsys):
    f = write_spec(tmp_path, SAMPLE_NOT_PBW)
    assert run(["check", "pbw", "--spec", f]) == 1
    out = capsys.readouterr().out
    assert "C1: FAILS" in out
    assert "pbw basis: no" in out
    g = write_spec(tmp_path, SCALES_ONLY, "good.spec")
    assert run(["check", "pbw", "--spec", g]) == 0
    out = capsys.readouterr().out
    assert "diamond confluent: yes" in out
    assert "pbw basis: yes" in out


def test_check_pbw_json_is_deterministic(tmp_path, capsys):
    f = write_spec(tmp_path, SAMPLE_NOT_PBW)
    assert run(["check", "pbw", "--spec", f, "--json"]) == 1
    first = capsys.readouterr().out
    assert run(["check", "pbw", "--spec", f, "--json"]) == 1
    assert capsys.readouterr().out == first
    payload = json.loads(first)
    assert list(payload) == ["spec", "pbw"]
    assert list(payload["pbw"]) == ["conditions", "diamond_confluent"]
    conds = payload["pbw"]["conditions"]
    assert [c["id"] for c in conds] == [f"C{k}" for k in range(1, 11)]
    assert conds[0] == {"id": "C1", "expr": "-1", "holds": False}
    assert payload["pbw"]["diamond_confluent"] is False


def test_check_smooth_command(tmp_path, capsys):
    f = write_spec(tmp_path, FIVE_I)
    assert run(["check", "smooth", "--spec", f]) == 1
    out = capsys.readouterr().out
    assert "S1: FAILS" in out
    assert "obstruction: constant:a_lambda" in out
    assert "verdict: not_smooth" in out
    g = write_spec(tmp_path, SMOOTH_FILE, "smooth.spec")
    assert run(["check", "smooth", "--spec", g, "--max-degree", "1"]) == 0
    assert "verdict: smooth_verified" in capsys.readouterr().out


def test_check_smooth_json_sections(tmp_path, capsys):
    f = write_spec(tmp_path, FIVE_I)
    assert run(["check", "smooth", "--spec", f, "--json"]) == 1
    payload = json.loads(capsys.readouterr().out)
    sm = payload["smoothness"]
    assert list(sm) == ["thm31", "obstruction", "verdict", "stages", "failed_stage"]
    assert [c["id"] for c in sm["thm31"]] == [f"S{k}" for k in range(1, 11)]
    assert sm["obstruction"] == "constant:a_lambda"
    assert sm["verdict"] == "not_smooth"
    assert sm["failed_stage"] == "obstructions"
    assert [st["name"] for st in sm["stages"]] == ["pbw", "obstructions"]
    g = write_spec(tmp_path, SMOOTH_FILE, "smooth.spec")
    assert run(["check", "smooth", "--spec", g, "--max-degree", "1", "--json"]) == 0
    sm = json.loads(capsys.readouterr().out)["smoothness"]
    assert list(sm) == ["thm31", "obstruction", "verdict", "stages"]
    assert sm["verdict"] == "smooth_verified"


def test_verify_calculus_command(tmp_path, capsys):
    f = write_spec(tmp_path, SMOOTH_FILE)
    assert run(["verify", "calculus", "--spec", f]) == 2
    capsys.readouterr()
    assert run(["verify", "calculus", "--spec", f, "--max-degree", "1"]) == 0
    assert "result: all checks passed" in capsys.readouterr().out
    assert (
        run(["verify", "calculus", "--spec", f, "--max-degree", "1", "--json"]) == 0
    )
    section = json.loads(capsys.readouterr().out)["calculus"]
    assert list(section) == CALCULUS_KEYS
    assert section["max_degree"] == 1 and section["seed"] == 0
    for key in CALCULUS_KEYS[2:]:
        assert section[key] is True, key


def test_verify_calculus_on_a_failing_spec(tmp_path, capsys):
    f = write_spec(tmp_path, SAMPLE_NOT_PBW)
    assert run(["verify", "calculus", "--spec", f, "--max-degree", "1"]) == 1
    assert "result: failed at pbw" in capsys.readouterr().out
    assert (
        run(["verify", "calculus", "--spec", f, "--max-degree", "1", "--json"]) == 1
    )
    section = json.loads(capsys.readouterr().out)["calculus"]
    for key in CALCULUS_KEYS[2:]:
        assert section[key] is None, key


def test_table_command(tmp_path, capsys):
    assert run(["table1", "--max-degree", "1"]) == 0
    out = capsys.readouterr().out
    assert "all rows match" in out
    assert run(["table1", "--max-degree", "1", "--json"]) == 0
    table = json.loads(capsys.readouterr().out)["table1"]
    assert table["max_degree"] == 1 and table["all_match"] is True
    assert len(table["rows"]) == 15
    assert all(r["match"] for r in table["rows"])


def test_preset_commands(tmp_path, capsys):
    assert run(["presets", "list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(preset_ids()) == 16
    assert run(["presets", "list", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)["presets"]
    assert [r["id"] for r in rows] == list(preset_ids())
    assert run(["preset", "show", "2ii"]) == 0
    out = capsys.readouterr().out
    assert "beta = beta" in out and "d_mu = b" in out
    assert run(["preset", "show", "2ii", "--json"]) == 0
    shown = json.loads(capsys.readouterr().out)["preset"]
    assert shown["id"] == "2ii"
    assert shown["spec"]["alpha"] == "1" and shown["spec"]["beta"] == "beta"
    assert run(["preset", "show", "nope"]) == 2
    assert "unknown preset" in capsys.readouterr().err
    assert run(["preset", "show", "2ii"]) == 0
    capsys.readouterr()
    spec_text = None
    f = tmp_path / "copy.spec"
    assert run(["preset", "show", "5v"]) == 0
    spec_text = capsys.readouterr().out.split("expected: smooth\n", 1)[1]
    f.write_text(spec_text)
    assert parse_spec_file(f.read_text()) == preset("5v").spec


def test_usage_errors_and_help(capsys):
    assert run(["--help"]) == 0
    capsys.readouterr()
    assert run([]) == 2
    capsys.readouterr()
    assert run(["frobnicate"]) == 2
    capsys.readouterr()
