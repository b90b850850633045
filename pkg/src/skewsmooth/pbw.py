"""PBW-basis tests: closed-form coefficient conditions and overlap resolution.

The standard monomials x^i y^j z^l form a basis exactly when the one
ambiguous overlap word zyx resolves consistently, and that is equivalent
to ten polynomial conditions C1..C10 on the structure constants.  Both
routes are implemented so each can check the other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeffs import RationalFn
from .ncalg import (
    AlgebraSpec,
    NCMonomial,
    NCPoly,
    X,
    Y,
    Z,
    reduce_word_first,
    validate_spec,
)

__all__ = [
    "DiamondReport",
    "PbwCondition",
    "closed_form_coefficients",
    "diamond_check",
    "is_pbw",
    "pbw_conditions",
]


@dataclass(frozen=True)
class PbwCondition:
    id: str
    lhs: RationalFn
    holds: bool


def _condition_exprs(s: AlgebraSpec) -> dict:
    al, be, ga = s.alpha, s.beta, s.gamma
    return {
        "C1": s.a_lambda * (ga - be),
        "C2": s.a_mu * (al - 1) + s.b_lambda * (1 - be),
        "C3": s.b_mu * (al - ga),
        "C4": s.a_nu * (1 - al) + s.c_lambda * (ga - 1),
        "C5": s.b_nu * (be - 1) + s.c_mu * (1 - ga),
        "C6": s.c_nu * (be - al),
        "C7": (
            s.a_lambda * s.b_nu
            - s.a_lambda * s.c_mu
            + s.a_mu * s.a_nu * (1 - al)
            + ga * s.a_mu * s.c_lambda
            - s.a_nu * s.b_lambda
            + (ga - be) * s.d_lambda
        ),
        "C8": (
            s.a_mu * s.b_nu
            - al * s.a_nu * s.b_mu
            - s.b_lambda * s.c_mu
            + ga * s.b_mu * s.c_lambda
            + (al - ga) * s.d_mu
        ),
        "C9": (
            s.a_mu * s.c_nu
            - al * s.a_nu * s.c_mu
            - s.b_lambda * s.c_nu
            + s.b_nu * s.c_lambda
            + (ga - 1) * s.c_lambda * s.c_mu
            + (be - al) * s.d_nu
        ),
        "C10": (
            s.a_mu * s.d_nu
            - al * s.a_nu * s.d_mu
            - s.b_lambda * s.d_nu
            + s.b_nu * s.d_lambda
            + ga * s.c_lambda * s.d_mu
            - s.c_mu * s.d_lambda
        ),
    }


def pbw_conditions(s: AlgebraSpec) -> list:
    """The ten conditions, in order; each holds iff its expression vanishes."""
    validate_spec(s)
    return [
        PbwCondition(cid, expr, expr.is_zero)
        for cid, expr in _condition_exprs(s).items()
    ]


def is_pbw(s: AlgebraSpec) -> bool:
    """True when all ten coefficient conditions vanish identically."""
    return all(c.holds for c in pbw_conditions(s))


def closed_form_coefficients(s: AlgebraSpec) -> dict:
    """Predicted coefficients of the two-path difference on the word zyx.

    Keys are the eleven standard monomials of degree at most 3 that can
    occur; values are closed forms in the structure constants.  A zero
    difference on every key is equivalent to C1..C10.
    """
    validate_spec(s)
    c = _condition_exprs(s)
    scale = (s.alpha * s.gamma).inv()
    return {
        NCMonomial(1, 1, 1): RationalFn.const(0),
        NCMonomial(2, 0, 0): c["C1"] * scale,
        NCMonomial(1, 1, 0): c["C2"] * scale,
        NCMonomial(0, 2, 0): c["C3"] * scale,
        NCMonomial(1, 0, 1): s.beta * c["C4"] * scale,
        NCMonomial(0, 1, 1): c["C5"] * scale,
        NCMonomial(0, 0, 2): c["C6"] * scale,
        NCMonomial(1, 0, 0): c["C7"] * scale,
        NCMonomial(0, 1, 0): c["C8"] * scale,
        NCMonomial(0, 0, 1): c["C9"] * scale,
        NCMonomial(0, 0, 0): c["C10"] * scale,
    }


@dataclass(frozen=True)
class DiamondReport:
    """Both resolutions of the overlap word zyx and their difference."""

    path_a: NCPoly
    path_b: NCPoly
    difference: NCPoly
    confluent: bool
    closed_form_match: bool


def diamond_check(s: AlgebraSpec) -> DiamondReport:
    """Resolve zyx both ways; path_a rewrites yx first, path_b rewrites zy.

    closed_form_match records whether every monomial coefficient of the
    difference equals its predicted closed form, which cross-validates the
    rewriting engine against the condition expressions.
    """
    word = (Z, Y, X)
    path_a = reduce_word_first(s, word, 1)
    path_b = reduce_word_first(s, word, 0)
    difference = path_a - path_b
    predicted = closed_form_coefficients(s)
    match = all(difference.coeff(*m) == v for m, v in predicted.items())
    extra = set(difference.terms) - set(predicted)
    return DiamondReport(
        path_a=path_a,
        path_b=path_b,
        difference=difference,
        confluent=difference.is_zero,
        closed_form_match=match and not extra,
    )
