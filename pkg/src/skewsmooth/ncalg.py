"""A 3-generator skew polynomial ring presented by quadratic-affine relations.

The ring has generators x, y, z over the rational-function field, subject to

    y*z - alpha*z*y = a_lambda*x + b_lambda*y + c_lambda*z + d_lambda
    z*x - beta*x*z  = a_mu*x     + b_mu*y     + c_mu*z     + d_mu
    x*y - gamma*y*x = a_nu*x     + b_nu*y     + c_nu*z     + d_nu

with alpha, beta, gamma invertible.  Elements are kept as linear combinations
of the standard monomials x^i y^j z^l.  Products are computed by rewriting
words in the free algebra: the relations are oriented to eliminate the
descending pairs yx, zy and zx, and the strategy is deterministic (always
rewrite the leftmost descending pair), so every element has one well-defined
normal form even when the rewriting system is not confluent.

Each rewrite either swaps an adjacent descending pair (strictly decreasing
the inversion count of the word at fixed length) or strictly shortens the
word, so the rewriting terminates on every input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .coeffs import RF_ONE, RF_ZERO, RationalFn, rf

__all__ = [
    "AlgebraSpec",
    "Endo",
    "FIELD_NAMES",
    "InvalidSpec",
    "NCMonomial",
    "NCPoly",
    "X",
    "Y",
    "Z",
    "apply_endo",
    "compose_endos",
    "identity_endo",
    "make_spec",
    "nc_mul",
    "nc_pow",
    "random_ncpoly",
    "reduce_word",
    "reduce_word_first",
    "validate_spec",
]

X, Y, Z = 0, 1, 2
GEN_NAMES = ("x", "y", "z")

FIELD_NAMES = (
    "alpha",
    "beta",
    "gamma",
    "a_lambda",
    "b_lambda",
    "c_lambda",
    "d_lambda",
    "a_mu",
    "b_mu",
    "c_mu",
    "d_mu",
    "a_nu",
    "b_nu",
    "c_nu",
    "d_nu",
)


class InvalidSpec(ValueError):
    """A structure constant violates the invertibility requirements."""

    def __init__(self, field_name: str, message: str | None = None):
        self.field = field_name
        super().__init__(message or f"{field_name} must be nonzero")


class NCMonomial(NamedTuple):
    """The standard monomial x^i y^j z^l."""

    i: int
    j: int
    l: int

    @property
    def degree(self) -> int:
        return self.i + self.j + self.l


NC_UNIT = NCMonomial(0, 0, 0)


class NCPoly:
    """A finite linear combination of standard monomials.

    terms maps NCMonomial to a nonzero RationalFn.  Addition, negation and
    scalar action are spec-independent; the ring product lives in nc_mul
    because it depends on the structure constants.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict):
        self.terms = terms
        self._hash = None

    @classmethod
    def zero(cls) -> "NCPoly":
        return _NC_ZERO

    @classmethod
    def one(cls) -> "NCPoly":
        return _NC_ONE

    @classmethod
    def gen(cls, g: int) -> "NCPoly":
        return _NC_GENS[g]

    @classmethod
    def monomial(cls, i: int, j: int, l: int, coeff=1) -> "NCPoly":
        c = rf(coeff)
        if c.is_zero:
            return _NC_ZERO
        return cls({NCMonomial(i, j, l): c})

    @classmethod
    def constant(cls, coeff) -> "NCPoly":
        c = rf(coeff)
        if c.is_zero:
            return _NC_ZERO
        return cls({NC_UNIT: c})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and NC_UNIT in self.terms)

    def constant_value(self) -> RationalFn:
        if not self.is_constant:
            raise ValueError("not a constant element")
        return self.terms.get(NC_UNIT, RF_ZERO)

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(m.degree for m in self.terms)

    def coeff(self, i: int, j: int, l: int) -> RationalFn:
        return self.terms.get(NCMonomial(i, j, l), RF_ZERO)

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        d = dict(self.terms)
        for m, c in other.terms.items():
            v = d.get(m)
            if v is None:
                d[m] = c
            else:
                v = v + c
                if v:
                    d[m] = v
                else:
                    del d[m]
        return NCPoly(d)

    def __neg__(self):
        return NCPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        c = rf(c)
        if c.is_zero or not self.terms:
            return _NC_ZERO
        if c.is_one:
            return self
        return NCPoly({m: v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            self._hash = h
        return h

    def __repr__(self):
        if not self.terms:
            return "NCPoly(0)"
        bits = []
        for m in sorted(self.terms, key=lambda m: (m.degree, m), reverse=True):
            mono = "*".join(
                n if e == 1 else f"{n}^{e}"
                for n, e in zip(GEN_NAMES, m)
                if e
            )
            bits.append(f"({self.terms[m]!r})*{mono}" if mono else f"({self.terms[m]!r})")
        return "NCPoly(" + " + ".join(bits) + ")"


_NC_ZERO = NCPoly({})
_NC_ONE = NCPoly({NC_UNIT: RF_ONE})
_NC_GENS = (
    NCPoly({NCMonomial(1, 0, 0): RF_ONE}),
    NCPoly({NCMonomial(0, 1, 0): RF_ONE}),
    NCPoly({NCMonomial(0, 0, 1): RF_ONE}),
)


@dataclass(frozen=True)
class AlgebraSpec:
    """The fifteen structure constants of a presentation."""

    alpha: RationalFn
    beta: RationalFn
    gamma: RationalFn
    a_lambda: RationalFn
    b_lambda: RationalFn
    c_lambda: RationalFn
    d_lambda: RationalFn
    a_mu: RationalFn
    b_mu: RationalFn
    c_mu: RationalFn
    d_mu: RationalFn
    a_nu: RationalFn
    b_nu: RationalFn
    c_nu: RationalFn
    d_nu: RationalFn
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def fields(self) -> dict:
        return {name: getattr(self, name) for name in FIELD_NAMES}

    def subs(self, bindings) -> "AlgebraSpec":
        """Substitute parameter values into every structure constant."""
        return AlgebraSpec(**{n: getattr(self, n).subst(bindings) for n in FIELD_NAMES})


def make_spec(alpha, beta, gamma, **coeffs) -> AlgebraSpec:
    """Build an AlgebraSpec, coercing ints, Fractions and parameter names."""
    values = {name: RF_ZERO for name in FIELD_NAMES[3:]}
    for key, val in coeffs.items():
        if key not in values:
            raise TypeError(f"unknown structure constant {key!r}")
        values[key] = rf(val)
    return AlgebraSpec(alpha=rf(alpha), beta=rf(beta), gamma=rf(gamma), **values)


def validate_spec(s: AlgebraSpec) -> None:
    """Check that alpha, beta and gamma are invertible."""
    for name in ("alpha", "beta", "gamma"):
        if getattr(s, name).is_zero:
            raise InvalidSpec(name)


def _rules(s: AlgebraSpec) -> dict:
    rules = s._cache.get("rules")
    if rules is None:
        validate_spec(s)
        ai = s.alpha.inv()
        gi = s.gamma.inv()
        rules = {
            # zy -> alpha^-1 * (yz - a_lambda*x - b_lambda*y - c_lambda*z - d_lambda)
            (Z, Y): (
                ai,
                (-ai * s.a_lambda, -ai * s.b_lambda, -ai * s.c_lambda, -ai * s.d_lambda),
            ),
            # zx -> beta*xz + a_mu*x + b_mu*y + c_mu*z + d_mu
            (Z, X): (s.beta, (s.a_mu, s.b_mu, s.c_mu, s.d_mu)),
            # yx -> gamma^-1 * (xy - a_nu*x - b_nu*y - c_nu*z - d_nu)
            (Y, X): (
                gi,
                (-gi * s.a_nu, -gi * s.b_nu, -gi * s.c_nu, -gi * s.d_nu),
            ),
        }
        s._cache["rules"] = rules
    return rules


def _acc_add(acc: dict, terms: dict, c: RationalFn) -> None:
    for m, cm in terms.items():
        add = cm * c
        cur = acc.get(m)
        if cur is None:
            if add:
                acc[m] = add
        else:
            cur = cur + add
            if cur:
                acc[m] = cur
            else:
                del acc[m]


def _rewrite_at(s: AlgebraSpec, w: tuple, t: int) -> dict:
    """Apply the rewrite for the descending pair at position t, then reduce."""
    q, affine = _rules(s)[(w[t], w[t + 1])]
    head, tail = w[:t], w[t + 2 :]
    acc: dict = {}
    _acc_add(acc, _reduce(s, head + (w[t + 1], w[t]) + tail), q)
    for g in (X, Y, Z):
        cg = affine[g]
        if cg:
            _acc_add(acc, _reduce(s, head + (g,) + tail), cg)
    c1 = affine[3]
    if c1:
        _acc_add(acc, _reduce(s, head + tail), c1)
    return acc


def _reduce(s: AlgebraSpec, w: tuple) -> dict:
    cache = s._cache
    hit = cache.get(w)
    if hit is not None:
        return hit
    t = None
    for k in range(len(w) - 1):
        if w[k] > w[k + 1]:
            t = k
            break
    if t is None:
        res = {NCMonomial(w.count(X), w.count(Y), w.count(Z)): RF_ONE}
    else:
        res = _rewrite_at(s, w, t)
    cache[w] = res
    return res


def reduce_word(s: AlgebraSpec, word) -> NCPoly:
    """Normal form of a word in the generators (a tuple over {X, Y, Z})."""
    w = tuple(word)
    _rules(s)
    return NCPoly(dict(_reduce(s, w)))


def reduce_word_first(s: AlgebraSpec, word, pos: int) -> NCPoly:
    """Normal form after forcing the first rewrite at the given position.

    The pair at pos must be descending; every later step uses the default
    leftmost strategy, so two calls with different positions expose exactly
    one strategic choice.
    """
    w = tuple(word)
    if not 0 <= pos < len(w) - 1 or w[pos] <= w[pos + 1]:
        raise ValueError(f"no descending pair at position {pos}")
    _rules(s)
    return NCPoly(dict(_rewrite_at(s, w, pos)))


def _mono_product(s: AlgebraSpec, m1: NCMonomial, m2: NCMonomial) -> dict:
    # x^i prefixes and z^l suffixes never form a descending pair with any
    # neighbour, so only the middle word y^j1 z^l1 x^i2 y^j2 needs rewriting;
    # the result is shifted back by (i1, 0, l2).
    mid = (Y,) * m1.j + (Z,) * m1.l + (X,) * m2.i + (Y,) * m2.j
    red = _reduce(s, mid)
    i0, l0 = m1.i, m2.l
    if not i0 and not l0:
        return red
    return {NCMonomial(m.i + i0, m.j, m.l + l0): c for m, c in red.items()}


def nc_mul(s: AlgebraSpec, p: NCPoly, q: NCPoly) -> NCPoly:
    """Product of two normal-form elements."""
    if p.is_zero or q.is_zero:
        return _NC_ZERO
    _rules(s)
    acc: dict = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            _acc_add(acc, _mono_product(s, m1, m2), c1 * c2)
    return NCPoly(acc)


def nc_pow(s: AlgebraSpec, p: NCPoly, n: int) -> NCPoly:
    """p multiplied by itself n times, folding left to right."""
    if n < 0:
        raise ValueError("negative power in the ring")
    out = _NC_ONE
    for _ in range(n):
        out = nc_mul(s, out, p)
    return out


@dataclass(frozen=True)
class Endo:
    """A ring endomorphism given by its images of x, y and z.

    inverse, when present, holds the generator images of a two-sided
    inverse, so the endomorphism is known to be an automorphism.
    """

    img_x: NCPoly
    img_y: NCPoly
    img_z: NCPoly
    inverse: Optional[tuple] = None

    def images(self) -> tuple:
        return (self.img_x, self.img_y, self.img_z)


def identity_endo() -> Endo:
    gens = (NCPoly.gen(X), NCPoly.gen(Y), NCPoly.gen(Z))
    return Endo(*gens, inverse=gens)


def apply_endo(s: AlgebraSpec, e: Endo, p: NCPoly) -> NCPoly:
    """Image of p, substituting generator images left to right."""
    if p.is_zero:
        return _NC_ZERO
    cache = s._cache.setdefault(("endo", e), {})

    def image(m: NCMonomial) -> NCPoly:
        hit = cache.get(m)
        if hit is not None:
            return hit
        if m.l:
            out = nc_mul(s, image(NCMonomial(m.i, m.j, m.l - 1)), e.img_z)
        elif m.j:
            out = nc_mul(s, image(NCMonomial(m.i, m.j - 1, 0)), e.img_y)
        elif m.i:
            out = nc_mul(s, image(NCMonomial(m.i - 1, 0, 0)), e.img_x)
        else:
            out = _NC_ONE
        cache[m] = out
        return out

    total = _NC_ZERO
    for m, c in p.terms.items():
        total = total + image(m).scale(c)
    return total


def compose_endos(s: AlgebraSpec, e1: Endo, e2: Endo) -> Endo:
    """The endomorphism p -> e1(e2(p)); inverses compose when both are known."""
    imgs = tuple(apply_endo(s, e1, img) for img in e2.images())
    inv = None
    if e1.inverse is not None and e2.inverse is not None:
        inv2 = Endo(*e2.inverse)
        inv = tuple(apply_endo(s, inv2, img) for img in e1.inverse)
    return Endo(*imgs, inverse=inv)


def random_ncpoly(rng, max_degree: int = 3, max_terms: int = 3) -> NCPoly:
    """A small random element with integer coefficients, for seeded sweeps."""
    out: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        while True:
            i = rng.randint(0, max_degree)
            j = rng.randint(0, max_degree)
            l = rng.randint(0, max_degree)
            if i + j + l <= max_degree:
                break
        c = rng.choice((-2, -1, -1, 1, 1, 2, 3))
        m = NCMonomial(i, j, l)
        cur = out.get(m, RF_ZERO) + c
        if cur:
            out[m] = cur
        else:
            out.pop(m, None)
    return NCPoly(out)
