"""Shared random generators for the test suite."""

import random
from fractions import Fraction

from skewsmooth.coeffs import MultiPoly, RationalFn, param, rf
from skewsmooth.ncalg import FIELD_NAMES, NCMonomial, NCPoly, make_spec

SEED = 20260822

PARAM_NAMES = ("a", "b", "c")

AFFINE_FIELDS = FIELD_NAMES[3:]

# Most affine coefficients are zero so that random specs hit the
# interesting branches; "sym" draws a fresh symbolic parameter.
COEFF_POOL = [0, 0, 0, 1, -1, 2, -2, "sym"]
SCALE_POOL = [1, -1, 2, -2, "sym"]


def random_multipoly(rng: random.Random, max_terms: int = 3) -> MultiPoly:
    out = MultiPoly.const(Fraction(0))
    for _ in range(rng.randrange(1, max_terms + 1)):
        term = MultiPoly.const(
            Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
        )
        for _ in range(rng.randrange(0, 3)):
            term = term * MultiPoly.var(rng.choice(PARAM_NAMES))
        out = out + term
    return out


def random_ratfn(rng: random.Random, max_terms: int = 3) -> RationalFn:
    num = random_multipoly(rng, max_terms)
    den = random_multipoly(rng, 2)
    while den.is_zero:
        den = random_multipoly(rng, 2)
    return RationalFn(num, den)


def random_spec(rng: random.Random):
    """A random spec: sparse affine coefficients, nonzero scales."""
    scales = []
    for k in range(3):
        v = rng.choice(SCALE_POOL)
        scales.append(rf(param(f"w{k + 1}")) if v == "sym" else rf(v))
    coeffs = {}
    for k, name in enumerate(AFFINE_FIELDS):
        v = rng.choice(COEFF_POOL)
        if v == "sym":
            coeffs[name] = rf(param(f"u{k + 1}"))
        elif v:
            coeffs[name] = rf(v)
    return make_spec(*scales, **coeffs)


def random_normal_form(rng: random.Random, max_exp: int = 3, max_terms: int = 4) -> NCPoly:
    """A random ring element with rational-function coefficients."""
    terms = {}
    for _ in range(rng.randrange(1, max_terms + 1)):
        m = NCMonomial(
            rng.randrange(max_exp + 1),
            rng.randrange(max_exp + 1),
            rng.randrange(max_exp + 1),
        )
        c = random_ratfn(rng)
        if not c.is_zero:
            terms[m] = c
    return NCPoly(terms)
