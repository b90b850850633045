"""Exact arithmetic in the field Q(p1, ..., pm) of rational functions.

Polynomials are sparse dicts mapping parameter monomials to Fraction
coefficients; a monomial is a name-sorted tuple of (name, exponent) pairs
with positive exponents, the empty tuple standing for 1.  A rational
function keeps one canonical numerator/denominator pair: gcd(num, den) = 1
and den monic with respect to the graded-lexicographic term order (earlier
names rank higher), so structural equality coincides with equality in the
field and dict/hash use is safe.

Parameters are declared implicitly by use.  Names are lowercase-led ASCII
identifiers; "x", "y" and "z" are reserved for the ring generators.

Everything here is immutable and safe to share between threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _functools_reduce

__all__ = [
    "DenominatorVanishes",
    "DivisionByZero",
    "MultiPoly",
    "Param",
    "RF_ONE",
    "RF_ZERO",
    "RationalFn",
    "check_param_name",
    "param",
    "rf",
]


class DivisionByZero(ZeroDivisionError):
    """Division by the identically zero rational function."""


class DenominatorVanishes(ZeroDivisionError):
    """A substitution made a denominator identically zero."""


_NAME_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_RESERVED = frozenset(("x", "y", "z"))

_F0 = Fraction(0)
_F1 = Fraction(1)


def check_param_name(name: str) -> str:
    """Validate a parameter name, returning it unchanged."""
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise ValueError(f"invalid parameter name {name!r}")
    if name in _RESERVED:
        raise ValueError(f"{name!r} is reserved for a ring generator")
    return name


@dataclass(frozen=True)
class Param:
    """A named commuting parameter of the coefficient field."""

    name: str

    def __post_init__(self):
        check_param_name(self.name)


# A monomial in the parameters: (("alpha", 2), ("beta", 1)) means alpha^2*beta.
Mono = tuple


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for n, e in b:
        d[n] = d.get(n, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Mono, b: Mono):
    """a / b, or None when b does not divide a."""
    d = dict(a)
    for n, e in b:
        r = d.get(n, 0) - e
        if r < 0:
            return None
        if r:
            d[n] = r
        else:
            del d[n]
    return tuple(sorted(d.items()))


def _mono_gcd(a: Mono, b: Mono) -> Mono:
    db = dict(b)
    out = [(n, min(e, db[n])) for n, e in a if n in db]
    return tuple(out)


def _mono_key(m: Mono):
    # Graded-lex sort key.  Name characters are negated so that the
    # lexicographically earlier name wins, and a plain tuple comparison
    # then orders sparse monomials correctly.
    return (
        sum(e for _, e in m),
        tuple((tuple(-ord(c) for c in n), e) for n, e in m),
    )


class MultiPoly:
    """A sparse multivariate polynomial over Q in named parameters."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict):
        # The dict is trusted: no zero coefficients, keys canonical.
        self.terms = terms
        self._hash = None

    @classmethod
    def const(cls, value) -> "MultiPoly":
        q = Fraction(value)
        return cls({(): q}) if q else cls({})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        check_param_name(name)
        return cls({((name, 1),): _F1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    @property
    def is_one(self) -> bool:
        return self.terms.get(()) == 1 and len(self.terms) == 1

    def const_value(self) -> Fraction:
        if not self.is_const:
            raise ValueError("not a constant polynomial")
        return self.terms.get((), _F0)

    def variables(self) -> set:
        out = set()
        for m in self.terms:
            for n, _ in m:
                out.add(n)
        return out

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e for _, e in m) for m in self.terms)

    def leading(self):
        """(monomial, coefficient) of the graded-lex leading term."""
        m = max(self.terms, key=_mono_key)
        return m, self.terms[m]

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
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
        return MultiPoly(d)

    def __neg__(self):
        return MultiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return _MP_ZERO
        if len(other.terms) == 1:
            ((m2, c2),) = other.terms.items()
            return MultiPoly({_mono_mul(m, m2): c * c2 for m, c in self.terms.items()})
        if len(self.terms) == 1:
            return other * self
        d = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                k = _mono_mul(m1, m2)
                v = d.get(k)
                if v is None:
                    d[k] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v:
                        d[k] = v
                    else:
                        del d[k]
        return MultiPoly(d)

    def scale(self, q: Fraction) -> "MultiPoly":
        if not q:
            return _MP_ZERO
        if q == 1:
            return self
        return MultiPoly({m: c * q for m, c in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = _MP_ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
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
            return "MultiPoly(0)"
        bits = []
        for m in sorted(self.terms, key=_mono_key, reverse=True):
            c = self.terms[m]
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)
            bits.append(f"{c}" if not mono else f"{c}*{mono}")
        return "MultiPoly(" + " + ".join(bits) + ")"


_MP_ZERO = MultiPoly({})
_MP_ONE = MultiPoly({(): _F1})


def _monic(f: MultiPoly) -> MultiPoly:
    if f.is_zero:
        return f
    _, lc = f.leading()
    return f if lc == 1 else f.scale(1 / lc)


def _split_mono_content(f: MultiPoly):
    """Write f = m * core with m the gcd of f's monomials."""
    it = iter(f.terms)
    common = dict(next(it))
    for m in it:
        if not common:
            break
        dm = dict(m)
        for n in list(common):
            e = dm.get(n, 0)
            if e == 0:
                del common[n]
            elif e < common[n]:
                common[n] = e
    mono = tuple(sorted(common.items()))
    if not mono:
        return (), f
    core = MultiPoly({_mono_div(m, mono): c for m, c in f.terms.items()})
    return mono, core


def _univar(f: MultiPoly, v: str) -> dict:
    """View f as a polynomial in v with MultiPoly coefficients."""
    out = {}
    for m, c in f.terms.items():
        e = 0
        rest = []
        for n, k in m:
            if n == v:
                e = k
            else:
                rest.append((n, k))
        key = tuple(rest)
        coeff = out.get(e)
        if coeff is None:
            out[e] = {key: c}
        else:
            coeff[key] = coeff.get(key, _F0) + c
    return {e: MultiPoly({m: c for m, c in d.items() if c}) for e, d in out.items()}


def _from_univar(uni: dict, v: str) -> MultiPoly:
    d = {}
    for e, coeff in uni.items():
        for m, c in coeff.terms.items():
            key = _mono_mul(m, ((v, e),)) if e else m
            d[key] = d.get(key, _F0) + c
    return MultiPoly({m: c for m, c in d.items() if c})


def _deg_in(f: MultiPoly, v: str) -> int:
    best = 0
    for m in f.terms:
        for n, e in m:
            if n == v and e > best:
                best = e
    return best


def mp_div_exact(f: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Exact division; raises ArithmeticError when d does not divide f."""
    if d.is_zero:
        raise ArithmeticError("division by the zero polynomial")
    if f.is_zero:
        return f
    if d.is_one:
        return f
    dm, dc = d.leading()
    q = {}
    r = dict(f.terms)
    while r:
        rm = max(r, key=_mono_key)
        qm = _mono_div(rm, dm)
        if qm is None:
            raise ArithmeticError("non-exact polynomial division")
        qc = r[rm] / dc
        q[qm] = qc
        for m2, c2 in d.terms.items():
            k = _mono_mul(qm, m2)
            v = r.get(k, _F0) - qc * c2
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return MultiPoly(q)


def _content_prim(f: MultiPoly, v: str):
    uni = _univar(f, v)
    cont = None
    for c in uni.values():
        cont = c if cont is None else mp_gcd(cont, c)
        if cont.is_one:
            return _MP_ONE, f
    cont = _monic(cont)
    if cont.is_one:
        return _MP_ONE, f
    prim = _from_univar({e: mp_div_exact(c, cont) for e, c in uni.items()}, v)
    return cont, prim


def _rat_normalize(f: MultiPoly) -> MultiPoly:
    # Scale so coefficients are integers with gcd 1; keeps PRS sizes down.
    nums = [c.numerator for c in f.terms.values()]
    dens = [c.denominator for c in f.terms.values()]
    g = _functools_reduce(math.gcd, nums)
    l = _functools_reduce(math.lcm, dens)
    q = Fraction(l, g)
    return f if q == 1 else f.scale(q)


def _pseudo_rem(a: MultiPoly, b: MultiPoly, v: str) -> MultiPoly:
    ub = _univar(b, v)
    db = max(ub)
    lb = ub[db]
    r = _univar(a, v)
    while r:
        dr = max(r)
        if dr < db:
            break
        lr = r[dr]
        new = {}
        for e, c in r.items():
            if e != dr:
                new[e] = c * lb
        for e, c in ub.items():
            if e == db:
                continue
            k = e + dr - db
            t = c * lr
            cur = new.get(k)
            nv = (cur - t) if cur is not None else -t
            if nv.is_zero:
                new.pop(k, None)
            else:
                new[k] = nv
        r = new
    return _from_univar(r, v)


def _try_div(f: MultiPoly, d: MultiPoly):
    try:
        return mp_div_exact(f, d)
    except ArithmeticError:
        return None


def _gcd_core(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    shared = f.variables() & g.variables()
    if not shared:
        return _MP_ONE
    v = max(shared)
    fc, fp = _content_prim(f, v)
    gc, gp = _content_prim(g, v)
    cont = mp_gcd(fc, gc)
    a, b = fp, gp
    if _deg_in(a, v) < _deg_in(b, v):
        a, b = b, a
    # Trial division catches the common case of outright cancellation
    # before any pseudo-remainder growth happens.
    if _try_div(a, b) is not None:
        return cont * b
    while True:
        r = _pseudo_rem(a, b, v)
        if r.is_zero:
            prim = b
            break
        if _deg_in(r, v) == 0:
            prim = _MP_ONE
            break
        a, b = b, _rat_normalize(_content_prim(r, v)[1])
    return cont * prim


def _eval_at(f: MultiPoly, v: str, xi: int) -> MultiPoly:
    d = {}
    for m, c in f.terms.items():
        e = 0
        rest = []
        for n, k in m:
            if n == v:
                e = k
            else:
                rest.append((n, k))
        key = tuple(rest)
        d[key] = d.get(key, _F0) + c * xi**e
    return MultiPoly({m: c for m, c in d.items() if c})


def _int_primitive(f: MultiPoly) -> MultiPoly:
    # Integer coefficients with gcd 1, leading coefficient positive.
    f = _rat_normalize(f)
    _, lc = f.leading()
    return f if lc > 0 else -f


def _heugcd(f: MultiPoly, g: MultiPoly, depth: int = 0):
    """Evaluation/reconstruction gcd; returns None when unlucky.

    Inputs are integer-primitive.  A candidate is only returned after both
    exact divisions succeed, so a non-None answer is a true gcd.
    """
    fvars = f.variables()
    gvars = g.variables()
    if not fvars or not gvars:
        return _MP_ONE
    both = fvars & gvars
    if not both:
        return _MP_ONE
    v = max(both)
    dv = min(_deg_in(f, v), _deg_in(g, v))
    norm = min(
        max(abs(c) for c in f.terms.values()),
        max(abs(c) for c in g.terms.values()),
    )
    xi = 2 * int(norm) + 29
    for _ in range(8):
        fe = _eval_at(f, v, xi)
        ge = _eval_at(g, v, xi)
        if fe.is_zero or ge.is_zero:
            xi = 2 * xi + 29
            continue
        # The integer content of an evaluation carries the gcd factors that
        # involve only v, so it must enter the recursive gcd, not be stripped.
        cf = _functools_reduce(math.gcd, (int(c) for c in fe.terms.values()))
        cg = _functools_reduce(math.gcd, (int(c) for c in ge.terms.values()))
        ccont = math.gcd(cf, cg)
        if fe.is_const and ge.is_const:
            sub = MultiPoly.const(ccont)
        elif depth > 12:
            return None
        else:
            sub = _heugcd(
                _int_primitive(fe.scale(Fraction(1, cf))),
                _int_primitive(ge.scale(Fraction(1, cg))),
                depth + 1,
            )
            if sub is None:
                return None
            sub = sub.scale(Fraction(ccont))
        # xi-adic reconstruction of the eliminated variable.
        h = _MP_ZERO
        u = sub
        power = 0
        ok = True
        while not u.is_zero:
            if power > dv:
                ok = False
                break
            digit_terms = {}
            next_terms = {}
            half = xi // 2
            for m, c in u.terms.items():
                ci = int(c)
                r = ((ci + half) % xi) - half
                if r:
                    digit_terms[m] = Fraction(r)
                q = (ci - r) // xi
                if q:
                    next_terms[m] = Fraction(q)
            digit = MultiPoly(digit_terms)
            if not digit.is_zero:
                h = h + digit * MultiPoly({((v, power),): _F1} if power else {(): _F1})
            u = MultiPoly(next_terms)
            power += 1
        if ok and not h.is_zero:
            h = _int_primitive(h)
            if _try_div(f, h) is not None and _try_div(g, h) is not None:
                return h
        xi = 2 * xi + 29
    return None


def _poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    h = _heugcd(_int_primitive(f), _int_primitive(g))
    if h is not None:
        return h
    return _gcd_core(f, g)


def mp_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Monic gcd in Q[params]."""
    if f.is_zero:
        return _monic(g)
    if g.is_zero:
        return _monic(f)
    fm, fcore = _split_mono_content(f)
    gm, gcore = _split_mono_content(g)
    common = _mono_gcd(fm, gm)
    if len(fcore.terms) == 1 or len(gcore.terms) == 1:
        # A single-term core is a unit times a monomial, and its monomial
        # part was already stripped, so the core gcd is 1.
        core = _MP_ONE
    else:
        core = _monic(_poly_gcd(fcore, gcore))
    if not common:
        return core
    return core * MultiPoly({common: _F1})


class RationalFn:
    """An element of the rational-function field, kept in canonical form."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: MultiPoly, den: MultiPoly = _MP_ONE):
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        if num.is_zero:
            num, den = _MP_ZERO, _MP_ONE
        elif not den.is_one:
            g = mp_gcd(num, den)
            if not g.is_one:
                num = mp_div_exact(num, g)
                den = mp_div_exact(den, g)
            _, lc = den.leading()
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, value) -> "RationalFn":
        q = Fraction(value)
        out = object.__new__(cls)
        out.num = MultiPoly({(): q}) if q else _MP_ZERO
        out.den = _MP_ONE
        out._hash = None
        return out

    @classmethod
    def parameter(cls, name: str) -> "RationalFn":
        out = object.__new__(cls)
        out.num = MultiPoly.var(name)
        out.den = _MP_ONE
        out._hash = None
        return out

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.den.is_one and self.num.is_one

    @property
    def is_constant(self) -> bool:
        return self.num.is_const and self.den.is_one

    def as_fraction(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("not a constant rational function")
        return self.num.const_value()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def __bool__(self):
        return not self.num.is_zero

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFn.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den is o.den or self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        if self.den.is_one:
            return RationalFn(self.num * o.den + o.num, o.den)
        if o.den.is_one:
            return RationalFn(self.num + o.num * self.den, self.den)
        g = mp_gcd(self.den, o.den)
        if g.is_one:
            return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)
        # Work over the lcm of the denominators; any residual common factor
        # of the result divides g, which keeps the final gcd small.
        d2 = mp_div_exact(o.den, g)
        num = self.num * d2 + o.num * mp_div_exact(self.den, g)
        return RationalFn(num, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(RationalFn)
        out.num = -self.num
        out.den = self.den
        out._hash = None
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        # Cross-cancel first: both inputs are canonical, so the result of
        # (n1/g1)(n2/g2) over (d1/g2)(d2/g1) is already fully reduced.
        if not d2.is_one and not n1.is_zero:
            g1 = mp_gcd(n1, d2)
            if not g1.is_one:
                n1 = mp_div_exact(n1, g1)
                d2 = mp_div_exact(d2, g1)
        if not d1.is_one and not n2.is_zero:
            g2 = mp_gcd(n2, d1)
            if not g2.is_one:
                n2 = mp_div_exact(n2, g2)
                d1 = mp_div_exact(d1, g2)
        out = object.__new__(RationalFn)
        num = n1 * n2
        den = d1 * d2
        if num.is_zero:
            num, den = _MP_ZERO, _MP_ONE
        elif not den.is_one:
            _, lc = den.leading()
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        out.num = num
        out.den = den
        out._hash = None
        return out

    __rmul__ = __mul__

    def inv(self) -> "RationalFn":
        if self.num.is_zero:
            raise DivisionByZero("inverse of zero")
        # self is canonical, so den/num is already reduced; only re-scale.
        num, den = self.den, self.num
        _, lc = den.leading()
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.scale(1 / lc)
        out = object.__new__(RationalFn)
        out.num = num
        out.den = den
        out._hash = None
        return out

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = RF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def subst(self, bindings) -> "RationalFn":
        """Evaluate at the given parameter bindings, unbound names staying symbolic."""
        binds = {}
        for k, v in bindings.items():
            name = k.name if isinstance(k, Param) else check_param_name(k)
            binds[name] = rf(v)
        n = _mp_eval(self.num, binds)
        d = _mp_eval(self.den, binds)
        if d.is_zero:
            raise DenominatorVanishes(
                "substitution makes the denominator identically zero"
            )
        return n / d

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            self._hash = h
        return h

    def __repr__(self):
        if self.den.is_one:
            return f"RationalFn({self.num!r})"
        return f"RationalFn({self.num!r} / {self.den!r})"


def _mp_eval(f: MultiPoly, binds: dict) -> RationalFn:
    total = RF_ZERO
    for m, c in f.terms.items():
        free = []
        bound = RationalFn.const(c)
        for n, e in m:
            v = binds.get(n)
            if v is None:
                free.append((n, e))
            else:
                bound = bound * v**e
        if free:
            bound = bound * RationalFn(MultiPoly({tuple(free): _F1}))
        total = total + bound
    return total


RF_ZERO = RationalFn.const(0)
RF_ONE = RationalFn.const(1)


def param(name: str) -> RationalFn:
    """The parameter with the given name, as a rational function."""
    return RationalFn.parameter(name)


def rf(value) -> RationalFn:
    """Coerce an int, Fraction, Param or parameter name to a RationalFn."""
    if isinstance(value, RationalFn):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalFn.const(value)
    if isinstance(value, Param):
        return RationalFn.parameter(value.name)
    if isinstance(value, str):
        return RationalFn.parameter(value)
    raise TypeError(f"cannot coerce {value!r} to a rational function")
