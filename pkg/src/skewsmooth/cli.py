"""Command line front end: expression parsing, spec files, reports.

Expressions use a small arithmetic grammar over the generators x, y, z,
parameter names (lowercase first letter), and integer literals:

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | primary ['^' uint]
    primary := atom | '(' expr ')'

Multiplication is always written out: "x*y", never "xy".  Division is
only by constants when the expression lives in the ring; coefficient
expressions may divide by any nonzero parameter expression.

A spec file is line oriented: one "name = expression" per line, '#'
starts a comment, alpha/beta/gamma are required and every other
coefficient defaults to zero.  Values must be generator-free.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .coeffs import DivisionByZero, RationalFn, _mono_key, param, rf
from .ncalg import (
    X,
    Y,
    Z,
    AlgebraSpec,
    FIELD_NAMES,
    InvalidSpec,
    NCPoly,
    make_spec,
    nc_mul,
    nc_pow,
    validate_spec,
)
from .pbw import diamond_check, is_pbw, pbw_conditions
from .smooth import (
    SmoothnessKind,
    UnknownPreset,
    classify,
    preset,
    presets,
    smoothness_conditions,
    smoothness_obstruction,
    table1,
    verify_construction,
)

__all__ = [
    "ExprEvalError",
    "ExprSyntaxError",
    "SpecParseError",
    "eval_coeff_expr",
    "eval_ring_expr",
    "format_multipoly",
    "format_ncpoly",
    "format_ratfn",
    "main",
    "parse_expr_text",
    "parse_spec_file",
    "render_spec",
    "run",
]


# ---------------------------------------------------------------------------
# tokens and syntax trees


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class ExprEvalError(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", one of "+-*/^()", or "end"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            toks.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("end", "", line, col))
    return toks


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    ident: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*", "/"
    lhs: object
    rhs: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: str):
        t = self.peek()
        got = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"expected {expected}, got {got}", t.line, t.col)

    def parse(self):
        node = self.expr()
        if self.peek().kind != "end":
            self.fail("'+', '-', '*', '/', '^', or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind in "+-":
            op = self.take().kind
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek().kind in "*/":
            op = self.take().kind
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.peek().kind == "-":
            self.take()
            return Neg(self.factor())
        node = self.primary()
        if self.peek().kind == "^":
            self.take()
            t = self.peek()
            if t.kind != "num":
                self.fail("a nonnegative integer exponent")
            self.take()
            node = Pow(node, int(t.text))
        return node

    def primary(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return Num(int(t.text))
        if t.kind == "ident":
            name = t.text
            if len(name) > 1 and all(c in "xyz" for c in name):
                hint = "*".join(name)
                raise ExprSyntaxError(
                    f"{name!r} is not a name; write the product as {hint!r}",
                    t.line,
                    t.col,
                )
            if not name[0].islower():
                raise ExprSyntaxError(
                    f"{name!r}: names start with a lowercase letter", t.line, t.col
                )
            self.take()
            return Name(name)
        if t.kind == "(":
            self.take()
            node = self.expr()
            if self.peek().kind != ")":
                self.fail("')'")
            self.take()
            return node
        self.fail("a number, a name, '-', or '('")


def parse_expr_text(text: str):
    """Parse an expression into a syntax tree."""
    return _Parser(_tokenize(text)).parse()


# ---------------------------------------------------------------------------
# evaluation


_GEN_BY_NAME = {"x": X, "y": Y, "z": Z}


def eval_ring_expr(node, s: AlgebraSpec) -> NCPoly:
    """Evaluate a syntax tree in the ring; products are straightened."""
    if isinstance(node, Num):
        return NCPoly.constant(rf(node.value))
    if isinstance(node, Name):
        g = _GEN_BY_NAME.get(node.ident)
        if g is not None:
            return NCPoly.gen(g)
        return NCPoly.constant(rf(param(node.ident)))
    if isinstance(node, Neg):
        return -eval_ring_expr(node.operand, s)
    if isinstance(node, Pow):
        return nc_pow(s, eval_ring_expr(node.base, s), node.exponent)
    if isinstance(node, BinOp):
        a = eval_ring_expr(node.lhs, s)
        b = eval_ring_expr(node.rhs, s)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return nc_mul(s, a, b)
        if not b.is_constant:
            raise ExprEvalError("division is only defined by constants")
        return a.scale(b.constant_value().inv())
    raise TypeError(f"not a syntax tree node: {node!r}")


def eval_coeff_expr(node) -> RationalFn:
    """Evaluate a generator-free syntax tree to a coefficient."""
    if isinstance(node, Num):
        return rf(node.value)
    if isinstance(node, Name):
        if node.ident in _GEN_BY_NAME:
            raise ExprEvalError(
                f"generator {node.ident!r} is not allowed in a coefficient"
            )
        return rf(param(node.ident))
    if isinstance(node, Neg):
        return -eval_coeff_expr(node.operand)
    if isinstance(node, Pow):
        return eval_coeff_expr(node.base) ** node.exponent
    if isinstance(node, BinOp):
        a = eval_coeff_expr(node.lhs)
        b = eval_coeff_expr(node.rhs)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a * b.inv()
    raise TypeError(f"not a syntax tree node: {node!r}")


# ---------------------------------------------------------------------------
# spec files


class SpecParseError(ValueError):
    def __init__(self, line: Optional[int], reason: str):
        at = f"line {line}: " if line else ""
        super().__init__(f"{at}{reason}")
        self.line = line
        self.reason = reason


def parse_spec_file(text: str) -> AlgebraSpec:
    """Read a spec from its line-oriented "name = expression" format."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, rhs = line.partition("=")
        key = key.strip()
        if not eq:
            raise SpecParseError(lineno, "expected 'name = expression'")
        if key not in FIELD_NAMES:
            raise SpecParseError(lineno, f"unknown coefficient {key!r}")
        if key in values:
            raise SpecParseError(lineno, f"duplicate coefficient {key!r}")
        try:
            values[key] = eval_coeff_expr(parse_expr_text(rhs))
        except (ExprSyntaxError, ExprEvalError, DivisionByZero) as e:
            raise SpecParseError(lineno, str(e)) from None
    for name in ("alpha", "beta", "gamma"):
        if name not in values:
            raise SpecParseError(None, f"missing required coefficient {name!r}")
    s = make_spec(
        values.pop("alpha"), values.pop("beta"), values.pop("gamma"), **values
    )
    validate_spec(s)
    return s


def render_spec(s: AlgebraSpec) -> str:
    """Write a spec back out; zero coefficients are omitted."""
    lines = []
    for name in FIELD_NAMES:
        v = getattr(s, name)
        if name in ("alpha", "beta", "gamma") or not v.is_zero:
            lines.append(f"{name} = {format_ratfn(v)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# canonical printing


def _frac_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def format_multipoly(mp) -> str:
    """Print a parameter polynomial, terms in graded-lex descending order."""
    if mp.is_zero:
        return "0"
    parts = []
    for mono in sorted(mp.terms, key=_mono_key, reverse=True):
        coeff = mp.terms[mono]
        neg = coeff < 0
        mag = -coeff if neg else coeff
        factors = []
        if mag != 1 or not mono:
            factors.append(_frac_str(mag))
        for name, exp in mono:
            factors.append(name if exp == 1 else f"{name}^{exp}")
        body = "*".join(factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def format_ratfn(r: RationalFn) -> str:
    """Print a coefficient so that it reparses to the same value."""
    num = format_multipoly(r.num)
    if r.den.is_one:
        return num
    if len(r.num.terms) > 1:
        num = f"({num})"
    return f"{num}/({format_multipoly(r.den)})"


def _rf_is_negative(r: RationalFn) -> bool:
    if r.is_zero:
        return False
    _, c = r.num.leading()
    return c < 0


def format_ncpoly(p: NCPoly) -> str:
    """Print a ring element, terms in degree-then-exponent descending order."""
    if p.is_zero:
        return "0"
    parts = []
    order = sorted(p.terms, key=lambda m: (m.degree, (m.i, m.j, m.l)), reverse=True)
    for m in order:
        coeff = p.terms[m]
        neg = _rf_is_negative(coeff)
        if neg:
            coeff = -coeff
        gens = []
        for name, exp in (("x", m.i), ("y", m.j), ("z", m.l)):
            if exp == 1:
                gens.append(name)
            elif exp > 1:
                gens.append(f"{name}^{exp}")
        multi = len(coeff.num.terms) > 1 and coeff.den.is_one
        if gens and coeff.is_one:
            body = "*".join(gens)
        elif gens:
            cstr = format_ratfn(coeff)
            if multi:
                cstr = f"({cstr})"
            body = "*".join([cstr] + gens)
        else:
            cstr = format_ratfn(coeff)
            if multi and (neg or parts):
                cstr = f"({cstr})"
            body = cstr
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# report sections


def _spec_section(s: AlgebraSpec) -> dict:
    return {name: format_ratfn(getattr(s, name)) for name in FIELD_NAMES}


def _pbw_section(s: AlgebraSpec) -> dict:
    conds = pbw_conditions(s)
    report = diamond_check(s)
    return {
        "conditions": [
            {"id": c.id, "expr": format_ratfn(c.lhs), "holds": c.holds} for c in conds
        ],
        "diamond_confluent": report.confluent,
    }


_OBSTRUCTION_NONE = "none"


def _obstruction_str(s: AlgebraSpec) -> str:
    obs = smoothness_obstruction(s)
    if obs is None:
        return _OBSTRUCTION_NONE
    return f"{'generic' if obs.generic else 'constant'}:{obs.field}"


def _smoothness_section(s: AlgebraSpec, verdict) -> dict:
    out = {
        "thm31": [
            {
                "id": c.id,
                "expr": ", ".join(format_ratfn(e) for e in c.exprs),
                "holds": c.holds,
            }
            for c in smoothness_conditions(s)
        ],
        "obstruction": _obstruction_str(s),
        "verdict": verdict.kind.value,
        "stages": [
            {"name": st.name, "ok": st.ok, "detail": st.detail} for st in verdict.stages
        ],
    }
    if verdict.kind is not SmoothnessKind.SMOOTH_VERIFIED:
        out["failed_stage"] = verdict.failed_stage
    return out


def _calculus_section(verdict, max_degree: int, seed: int) -> dict:
    by_name = {st.name: st for st in verdict.stages}

    def flag(name: str):
        st = by_name.get(name)
        return None if st is None else st.ok

    diff = by_name.get("differential")
    if diff is None:
        oracle, leibniz = None, None
    elif diff.ok:
        oracle, leibniz = True, True
    elif "product rule" in diff.detail:
        oracle, leibniz = True, False
    else:
        oracle, leibniz = False, None
    return {
        "max_degree": max_degree,
        "seed": seed,
        "automorphisms_ok": flag("automorphisms"),
        "commutation_ok": flag("commutation"),
        "dd_zero": flag("d_squared"),
        "leibniz_ok": leibniz,
        "oracle_match": oracle,
        "connected": flag("connectedness"),
        "integrable": flag("integrability"),
    }


def _emit(payload: dict):
    print(json.dumps(payload, ensure_ascii=False, indent=2))


def _load_spec(path: str) -> AlgebraSpec:
    return parse_spec_file(Path(path).read_text(encoding="utf-8"))


_EXPECT_WORD = {True: "smooth", False: "not_smooth", None: None}


# ---------------------------------------------------------------------------
# commands


def _cmd_reduce(ns) -> int:
    s = _load_spec(ns.spec)
    value = eval_ring_expr(parse_expr_text(ns.expr), s)
    normal = format_ncpoly(value)
    if ns.json:
        _emit({"spec": _spec_section(s), "normal_form": normal})
    else:
        print(normal)
    return 0


def _cmd_check_pbw(ns) -> int:
    s = _load_spec(ns.spec)
    section = _pbw_section(s)
    ok = is_pbw(s)
    if ns.json:
        _emit({"spec": _spec_section(s), "pbw": section})
    else:
        for c in section["conditions"]:
            state = "holds" if c["holds"] else "FAILS"
            print(f"{c['id']}: {state}  [{c['expr']}]")
        print(f"diamond confluent: {'yes' if section['diamond_confluent'] else 'no'}")
        print(f"pbw basis: {'yes' if ok else 'no'}")
    return 0 if ok else 1


def _cmd_check_smooth(ns) -> int:
    s = _load_spec(ns.spec)
    verdict = classify(s, max_degree=ns.max_degree)
    if ns.json:
        _emit({"spec": _spec_section(s), "smoothness": _smoothness_section(s, verdict)})
    else:
        for c in smoothness_conditions(s):
            state = "holds" if c.holds else "FAILS"
            exprs = ", ".join(format_ratfn(e) for e in c.exprs)
            print(f"{c.id}: {state}  [{exprs}]")
        print(f"obstruction: {_obstruction_str(s)}")
        for st in verdict.stages:
            note = f"  ({st.detail})" if st.detail else ""
            print(f"stage {st.name}: {'ok' if st.ok else 'failed'}{note}")
        print(f"verdict: {verdict.kind.value}")
    return 0 if verdict.kind is SmoothnessKind.SMOOTH_VERIFIED else 1


def _cmd_verify_calculus(ns) -> int:
    s = _load_spec(ns.spec)
    verdict = verify_construction(s, max_degree=ns.max_degree, seed=ns.seed)
    section = _calculus_section(verdict, ns.max_degree, ns.seed)
    if ns.json:
        _emit({"spec": _spec_section(s), "calculus": section})
    else:
        labels = (
            ("automorphisms_ok", "automorphisms"),
            ("commutation_ok", "commutation"),
            ("oracle_match", "closed form matches recursion"),
            ("leibniz_ok", "product rule"),
            ("dd_zero", "d squared is zero"),
            ("connected", "connected"),
            ("integrable", "integrable"),
        )
        for key, label in labels:
            v = section[key]
            state = "skipped" if v is None else ("ok" if v else "failed")
            print(f"{label}: {state}")
        if verdict.kind is SmoothnessKind.SMOOTH_VERIFIED:
            print("result: all checks passed")
        else:
            print(f"result: failed at {verdict.failed_stage}")
    return 0 if verdict.kind is SmoothnessKind.SMOOTH_VERIFIED else 1


def _cmd_table1(ns) -> int:
    report = table1(max_degree=ns.max_degree)
    if ns.json:
        rows = [
            {
                "preset": r.preset_id,
                "expected": _EXPECT_WORD[r.expect_smooth],
                "verdict": r.kind.value,
                "match": r.match,
                "failed_stage": r.failed_stage,
            }
            for r in report.rows
        ]
        _emit(
            {
                "table1": {
                    "max_degree": report.max_degree,
                    "rows": rows,
                    "all_match": report.all_match,
                }
            }
        )
    else:
        for r in report.rows:
            expected = _EXPECT_WORD[r.expect_smooth] or "?"
            mark = "ok" if r.match else "MISMATCH"
            print(
                f"{r.preset_id:5s} expected {expected:10s} "
                f"verdict {r.kind.value:20s} {mark}"
            )
        print("all rows match" if report.all_match else "some rows mismatch")
    return 0 if report.all_match else 1


def _cmd_presets_list(ns) -> int:
    rows = presets()
    if ns.json:
        _emit(
            {
                "presets": [
                    {
                        "id": p.id,
                        "expected": _EXPECT_WORD[p.expect_smooth],
                        "note": p.note,
                    }
                    for p in rows
                ]
            }
        )
    else:
        for p in rows:
            expected = _EXPECT_WORD[p.expect_smooth] or "demo"
            print(f"{p.id:5s} {expected}")
    return 0


def _cmd_preset_show(ns) -> int:
    p = preset(ns.preset_id)
    if ns.json:
        _emit(
            {
                "preset": {
                    "id": p.id,
                    "expected": _EXPECT_WORD[p.expect_smooth],
                    "note": p.note,
                    "spec": _spec_section(p.spec),
                }
            }
        )
    else:
        print(f"preset: {p.id}")
        print(f"expected: {_EXPECT_WORD[p.expect_smooth] or 'demo'}")
        if p.note:
            print(f"note: {p.note}")
        print(render_spec(p.spec), end="")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_json(p: argparse.ArgumentParser, top: bool = False):
    p.add_argument(
        "--json",
        action="store_true",
        default=False if top else argparse.SUPPRESS,
        help="emit a JSON report instead of text",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewsmooth",
        description="PBW bases and differential smoothness of three-generator "
        "skew polynomial rings",
    )
    _add_json(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="straighten an expression to normal form")
    p.add_argument("--spec", required=True, metavar="FILE")
    p.add_argument("expr", metavar="EXPR")
    _add_json(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("check", help="run a yes/no check")
    _add_json(p)
    csub = p.add_subparsers(dest="what", required=True)

    q = csub.add_parser("pbw", help="straightening conditions and diamond test")
    q.add_argument("--spec", required=True, metavar="FILE")
    _add_json(q)
    q.set_defaults(func=_cmd_check_pbw)

    q = csub.add_parser("smooth", help="full smoothness classification")
    q.add_argument("--spec", required=True, metavar="FILE")
    q.add_argument("--max-degree", type=int, default=4, metavar="N")
    _add_json(q)
    q.set_defaults(func=_cmd_check_smooth)

    p = sub.add_parser("verify", help="run a verification sweep")
    _add_json(p)
    vsub = p.add_subparsers(dest="what", required=True)

    q = vsub.add_parser("calculus", help="verify the differential calculus")
    q.add_argument("--spec", required=True, metavar="FILE")
    q.add_argument("--max-degree", type=int, required=True, metavar="N")
    q.add_argument("--seed", type=int, default=0, metavar="S")
    _add_json(q)
    q.set_defaults(func=_cmd_verify_calculus)

    p = sub.add_parser("table1", help="classify every preset and compare")
    p.add_argument("--max-degree", type=int, default=4, metavar="N")
    _add_json(p)
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("presets", help="operations on the preset catalogue")
    _add_json(p)
    psub = p.add_subparsers(dest="what", required=True)
    q = psub.add_parser("list", help="list preset ids")
    _add_json(q)
    q.set_defaults(func=_cmd_presets_list)

    p = sub.add_parser("preset", help="operations on a single preset")
    _add_json(p)
    psub = p.add_subparsers(dest="what", required=True)
    q = psub.add_parser("show", help="print one preset as a spec file")
    q.add_argument("preset_id", metavar="ID")
    _add_json(q)
    q.set_defaults(func=_cmd_preset_show)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        return ns.func(ns)
    except (
        ExprSyntaxError,
        ExprEvalError,
        SpecParseError,
        InvalidSpec,
        UnknownPreset,
        DivisionByZero,
        OSError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
