"""Univariate polynomials over a difference field.

Dense representation, low degree first.  Finite-field factorization runs
squarefree decomposition, then distinct-degree splitting, then seeded
equal-degree splitting, so identical seeds give identical factor orderings.
"""

from __future__ import annotations

from dataclasses import dataclass
import random

from . import _multipoly as mp
from . import _polycore as pc
from .exactfield import (DifferenceField, FunctionField, GaloisField,
                         PrimeField, ShiftField)

DEFAULT_FACTOR_SEED = 0x0D1FFA17
_X_INDEX = 1 << 60   # reserved multipoly index for the polynomial variable


class UnsupportedBaseError(ValueError):
    """Operation needs a base field of a different descriptor."""


@dataclass(frozen=True)
class Poly:
    """coeffs[i] is the coefficient of x^i; no trailing zeros."""

    coeffs: tuple
    base: DifferenceField

    @staticmethod
    def make(base, coeffs):
        cs = pc.trim(base, [base.canon(c) for c in coeffs])
        return Poly(tuple(cs), base)

    @staticmethod
    def from_ints(base, ints):
        return Poly.make(base, [base.from_int(n) for n in ints])

    @staticmethod
    def zero(base):
        return Poly((), base)

    @staticmethod
    def x(base):
        return Poly.make(base, [base.zero(), base.one()])

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.base.eq(self.coeffs[-1], self.base.one())

    def monic(self):
        return Poly(tuple(pc.monic(self.base, list(self.coeffs))), self.base)

    def __add__(self, other):
        _same_base(self, other)
        return Poly(tuple(pc.add(self.base, list(self.coeffs), list(other.coeffs))), self.base)

    def __sub__(self, other):
        _same_base(self, other)
        return Poly(tuple(pc.sub(self.base, list(self.coeffs), list(other.coeffs))), self.base)

    def __mul__(self, other):
        _same_base(self, other)
        return Poly(tuple(pc.mul(self.base, list(self.coeffs), list(other.coeffs))), self.base)

    def __divmod__(self, other):
        _same_base(self, other)
        q, r = pc.divmod_(self.base, list(self.coeffs), list(other.coeffs))
        return Poly(tuple(q), self.base), Poly(tuple(r), self.base)

    def scale(self, a):
        return Poly(tuple(pc.scale(self.base, list(self.coeffs), a)), self.base)

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.base == other.base
                and len(self.coeffs) == len(other.coeffs)
                and all(self.base.eq(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((len(self.coeffs), repr(self.base.descriptor())))

    def evaluate(self, a):
        return pc.evaluate(self.base, list(self.coeffs), a)

    def derivative(self):
        return Poly(tuple(pc.derivative(self.base, list(self.coeffs))), self.base)

    def to_json(self):
        return [self.base.scalar_to_json(c) for c in self.coeffs]

    @staticmethod
    def from_json(base, data):
        return Poly.make(base, [base.scalar_from_json(c) for c in data])

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if self.base.is_zero(c):
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "Poly(" + " + ".join(terms) + ")"


@dataclass(frozen=True)
class FactorList:
    """unit * prod(factor^mult) equals the factored input exactly."""

    unit: object
    factors: tuple  # of (Poly, int), factors monic irreducible

    def expand(self, base):
        acc = Poly.make(base, [self.unit])
        for f, m in self.factors:
            for _ in range(m):
                acc = acc * f
        return acc


def _same_base(f, g):
    if f.base != g.base:
        raise TypeError("polynomials over different base fields")


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(f, 0) is the monic normalization of f.

    Over function and shift fields the computation clears denominators and
    runs in the joint polynomial ring, avoiding rational-function swell.
    """
    _same_base(f, g)
    if isinstance(f.base, (FunctionField, ShiftField)):
        return _gcd_over_fraction_field(f, g)
    return Poly(tuple(pc.gcd(f.base, list(f.coeffs), list(g.coeffs))), f.base)


def _scalar_to_mp(base, c):
    """(numerator, denominator) of a field scalar as multipoly dicts."""
    if isinstance(base, ShiftField):
        return dict(c[0]), dict(c[1])
    num = {((0, i),) if i else (): x for i, x in enumerate(c[0])
           if not base.base.is_zero(x)}
    den = {((0, i),) if i else (): x for i, x in enumerate(c[1])
           if not base.base.is_zero(x)}
    return num, den


def _mp_to_scalar(base, poly):
    if isinstance(base, ShiftField):
        return base._make(poly, mp.const(base.base, base.base.one()))
    deg = 0
    for m in poly:
        for v, e in m:
            deg = max(deg, e)
    num = [base.base.zero()] * (deg + 1)
    for m, c in poly.items():
        e = m[0][1] if m else 0
        num[e] = c
    return base.from_polys(num, [base.base.one()])


def _gcd_over_fraction_field(f, g):
    base = f.base
    k0 = base.base

    def clear(poly):
        parts = [_scalar_to_mp(base, c) for c in poly.coeffs]
        common = mp.const(k0, k0.one())
        for _, den in parts:
            if not mp.is_zero(den):
                shared = mp.gcd(k0, common, den)
                common = mp.exact_div(k0, mp.mul(k0, common, den), shared)
        out = {}
        for e, (num, den) in enumerate(parts):
            if mp.is_zero(num):
                continue
            term = mp.mul(k0, num, mp.exact_div(k0, common, den))
            if e:
                term = mp.mul(k0, term, mp.var(k0, _X_INDEX, e))
            out = mp.add(k0, out, term)
        return out

    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    D = mp.gcd(k0, clear(f), clear(g))
    coeffs = [_mp_to_scalar(base, c) for c in mp.to_univariate(D, _X_INDEX)]
    return Poly.make(base, coeffs).monic()


def is_separable(f: Poly) -> bool:
    """gcd(f, f') = 1.  Rejects the zero polynomial."""
    if f.is_zero():
        raise ValueError("separability is undefined for the zero polynomial")
    return poly_gcd(f, f.derivative()).degree() == 0


def sigma_twist(f: Poly) -> Poly:
    """Apply the base endomorphism to every coefficient."""
    return Poly.make(f.base, [f.base.sigma(c) for c in f.coeffs])


def _require_finite(base):
    if not isinstance(base, (PrimeField, GaloisField)):
        raise UnsupportedBaseError(
            "factorization is only supported over finite fields")


def _pth_root_coeff(base, c):
    # In F_(p^s) the p-th root of c is c^(p^(s-1)).
    s = getattr(base, "degree", 1)
    p = base.characteristic()
    return base.pow(c, p ** (s - 1))


def _squarefree_decomposition(base, f):
    """List of (squarefree monic poly, multiplicity), pairwise coprime."""
    p = base.characteristic()
    out = []

    def rec(g, mult):
        g = pc.monic(base, g)
        if pc.deg(g) == 0:
            return
        dg = pc.derivative(base, g)
        if pc.is_zero(dg):
            # g = h(x^p); take the p-th root coefficientwise
            h = [base.zero()] * (pc.deg(g) // p + 1)
            for i in range(0, pc.deg(g) + 1, p):
                h[i // p] = _pth_root_coeff(base, g[i])
            rec(pc.trim(base, h), mult * p)
            return
        c = pc.gcd(base, g, dg)
        w = pc.divmod_(base, g, c)[0]
        i = 1
        while pc.deg(w) > 0:
            y = pc.gcd(base, w, c)
            z = pc.divmod_(base, w, y)[0]
            if pc.deg(z) > 0:
                out.append((z, mult * i))
            w = y
            c = pc.divmod_(base, c, y)[0]
            i += 1
        if pc.deg(c) > 0:
            rec(c, mult)

    rec(list(f), 1)
    return out


def _distinct_degree(base, f, q):
    """Split a squarefree monic f into (product-of-degree-d-factors, d)."""
    pieces = []
    x = pc.x_poly(base)
    h = pc.mod(base, x, f)
    d = 0
    rest = list(f)
    while pc.deg(rest) > 0:
        d += 1
        if 2 * d > pc.deg(rest):
            pieces.append((rest, pc.deg(rest)))
            break
        h = pc.pow_mod(base, h, q, rest)
        g = pc.gcd(base, pc.sub(base, h, x), rest)
        if pc.deg(g) > 0:
            pieces.append((g, d))
            rest = pc.divmod_(base, rest, g)[0]
            h = pc.mod(base, h, rest)
    return pieces


def _equal_degree_all(base, f, d, q, rng):
    if pc.deg(f) == d:
        return [f]
    g = pc.equal_degree_split(base, f, d, q, rng)
    rest = pc.divmod_(base, f, g)[0]
    return _equal_degree_all(base, g, d, q, rng) + _equal_degree_all(base, rest, d, q, rng)


def factor_over_finite_field(f: Poly, seed: int | None = None) -> FactorList:
    """Complete monic irreducible factorization with multiplicities."""
    base = f.base
    _require_finite(base)
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(DEFAULT_FACTOR_SEED if seed is None else seed)
    q = base.order
    unit = f.leading()
    work = pc.monic(base, list(f.coeffs))
    factors = []
    for sqf, mult in _squarefree_decomposition(base, work):
        for piece, d in _distinct_degree(base, sqf, q):
            for irr in _equal_degree_all(base, piece, d, q, rng):
                factors.append((Poly(tuple(pc.monic(base, irr)), base), mult))
    factors.sort(key=lambda fm: (fm[0].degree(), repr(fm[0].to_json()), fm[1]))
    result = FactorList(unit, tuple(factors))
    if result.expand(base) != f:
        raise AssertionError("factorization failed the exact product check")
    return result


def is_irreducible(f: Poly) -> bool:
    """Rabin test over a finite base field."""
    _require_finite(f.base)
    if f.is_zero():
        return False
    return pc.is_irreducible(f.base, list(f.coeffs), f.base.order)


def roots(f: Poly, seed: int | None = None):
    """Roots in the base field with multiplicities, via full factorization."""
    out = []
    for g, m in factor_over_finite_field(f, seed=seed).factors:
        if g.degree() == 1:
            out.append((f.base.neg(g.coeffs[0]), m))
    return out
