"""Exact difference fields: a base field together with an endomorphism.

Five descriptors are supported, each with unique canonical element forms
and no rounding anywhere:

  * the rationals with the identity endomorphism,
  * prime fields F_p with x -> x^(p^m) (which is the identity),
  * finite fields F_(p^n) cut out by an irreducible polynomial, with a
    Frobenius power as endomorphism,
  * univariate function fields k0(t) with sigma(t) = g(t) for a nonconstant
    rational function g, acting on k0 through a nested descriptor,
  * shift function fields k0(t_i : i >= min_index) with sigma(t_i) = t_(i+1),
    materialized lazily as computations touch new variables.

Elements are plain immutable data (ints, Fractions, tuples, dict fractions);
all arithmetic goes through the owning field object.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import random

from . import _multipoly as mp
from . import _polycore as pc


class FieldError(ValueError):
    """Invalid descriptor or construction data."""


class NotCanonicalError(AssertionError):
    """An element failed the canonical-form invariant."""


@dataclass(frozen=True)
class FrobeniusDescriptor:
    """x -> x^(p^m) on a field of characteristic p."""

    p: int
    m: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.m < 0:
            raise FieldError("Frobenius power must be >= 0")


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class DifferenceField:
    """Shared element protocol; subclasses fix the representation."""

    kind = "?"

    # subclasses implement: zero one add neg mul inv eq is_zero from_int
    # sigma canon sample scalar_to_json scalar_from_json descriptor

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = self.one()
        while e:
            if e & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            e >>= 1
        return acc

    def is_inversive(self):
        raise NotImplementedError

    def characteristic(self):
        raise NotImplementedError

    def check_canonical(self, a):
        if not self.eq(self.canon(a), a):
            raise NotCanonicalError(f"element {a!r} is not in canonical form")

    def __eq__(self, other):
        return isinstance(other, DifferenceField) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(repr(self.descriptor()))

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor()}>"


class Rationals(DifferenceField):
    kind = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def sigma(self, a):
        return a

    def canon(self, a):
        return Fraction(a)

    def sample(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def is_inversive(self):
        return True

    def characteristic(self):
        return 0

    def scalar_to_json(self, a):
        return str(a)

    def scalar_from_json(self, s):
        return Fraction(str(s))

    def descriptor(self):
        return {"kind": "Q"}


class PrimeField(DifferenceField):
    """F_p with sigma = x -> x^(p^m), which is the identity map."""

    kind = "Fq"

    def __init__(self, p, frobenius_power=1):
        FrobeniusDescriptor(p, frobenius_power)
        self.p = p
        self.frobenius_power = frobenius_power
        self.order = p
        self.degree = 1

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n % self.p

    def sigma(self, a):
        return a

    def sigma_inverse(self, a):
        return a

    def canon(self, a):
        return int(a) % self.p

    def sample(self, rng):
        return rng.randrange(self.p)

    def is_inversive(self):
        return True

    def characteristic(self):
        return self.p

    def scalar_to_json(self, a):
        return str(a)

    def scalar_from_json(self, s):
        return int(s) % self.p

    def descriptor(self):
        return {"kind": "Fq", "p": self.p, "frobenius_power": self.frobenius_power}


class GaloisField(DifferenceField):
    """F_(p^n) presented as F_p[x]/(defpoly), sigma a Frobenius power.

    Elements are length-n tuples of ints, coordinates in the power basis of
    the class of x.
    """

    kind = "Fq"

    def __init__(self, p, defpoly, frobenius_power=1, _validated=False):
        FrobeniusDescriptor(p, frobenius_power)
        fp = PrimeField(p)
        poly = [fp.canon(c) for c in defpoly]
        poly = pc.trim(fp, poly)
        n = pc.deg(poly)
        if n < 2:
            raise FieldError("defining polynomial must have degree >= 2")
        if poly[-1] != 1:
            poly = pc.monic(fp, poly)
        if not _validated:
            _certify_irreducible_over_prime(fp, poly)
        self.p = p
        self.prime = fp
        self.defpoly = tuple(poly)
        self.degree = n
        self.order = p ** n
        self.frobenius_power = frobenius_power

    def _lift(self, coeffs):
        c = list(coeffs) + [0] * (self.degree - len(coeffs))
        return tuple(c[: self.degree])

    def zero(self):
        return (0,) * self.degree

    def one(self):
        return self._lift([1])

    def generator(self):
        return self._lift([0, 1])

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        prod = pc.mul(self.prime, list(a), list(b))
        return self._lift(pc.mod(self.prime, prod, list(self.defpoly)))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        r = pc.invmod(self.prime, pc.trim(self.prime, list(a)), list(self.defpoly))
        return self._lift(r)

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def from_int(self, n):
        return self._lift([n % self.p])

    def sigma(self, a):
        m = self.frobenius_power % self.degree
        for _ in range(m):
            a = self.pow(a, self.p)
        return a

    def sigma_inverse(self, a):
        m = (-self.frobenius_power) % self.degree
        for _ in range(m):
            a = self.pow(a, self.p)
        return a

    def canon(self, a):
        return self._lift([int(x) % self.p for x in a])

    def sample(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def all_elements(self):
        def rec(i):
            if i == self.degree:
                yield ()
                return
            for rest in rec(i + 1):
                for c in range(self.p):
                    yield (c,) + rest

        return (tuple(t) for t in rec(0))

    def is_inversive(self):
        return True

    def characteristic(self):
        return self.p

    def scalar_to_json(self, a):
        return [int(x) for x in a]

    def scalar_from_json(self, s):
        if isinstance(s, str):
            s = [int(t) for t in s.strip("[]").split(",")] if s else []
        return self.canon(tuple(int(x) for x in s))

    def descriptor(self):
        return {
            "kind": "Fq",
            "p": self.p,
            "defpoly": [int(c) for c in self.defpoly],
            "frobenius_power": self.frobenius_power,
        }


def _certify_irreducible_over_prime(fp, poly):
    """Raise FieldError naming a nontrivial factor if poly is reducible."""
    if pc.is_irreducible(fp, poly, fp.p):
        return
    witness = _find_proper_factor(fp, poly, fp.p)
    raise FieldError(
        f"defining polynomial is reducible; nontrivial factor {witness}")


def _find_proper_factor(k, f, q):
    f = pc.monic(k, f)
    n = pc.deg(f)
    df = pc.derivative(k, f)
    g = pc.gcd(k, f, df)
    if 0 < pc.deg(g) < n:
        return g
    rng = random.Random(0x5EED)
    x = pc.x_poly(k)
    for d in range(1, n // 2 + 1):
        h = pc.mod(k, x, f)
        for _ in range(d):
            h = pc.pow_mod(k, h, q, f)
        g = pc.gcd(k, pc.sub(k, h, x), f)
        if 0 < pc.deg(g) < n:
            return g
        if pc.deg(g) == n and d < n:
            return pc.equal_degree_split(k, f, d, q, rng)
    raise AssertionError("reducible polynomial with no findable factor")


class FunctionField(DifferenceField):
    """k0(t) with sigma(t) = g(t), sigma acting on k0 via its own field.

    Elements are (num, den) pairs of coefficient tuples over k0, den monic,
    num and den coprime.
    """

    kind = "Qt"

    def __init__(self, base, sigma_num, sigma_den):
        if isinstance(base, (FunctionField, ShiftField)):
            raise FieldError("function-field base must be Q or a finite field")
        self.base = base
        num = pc.trim(base, [base.canon(c) for c in sigma_num])
        den = pc.trim(base, [base.canon(c) for c in sigma_den])
        if not den:
            raise FieldError("sigma(t) has zero denominator")
        g = pc.gcd(base, num, den)
        if pc.deg(g) > 0:
            num = pc.divmod_(base, num, g)[0]
            den = pc.divmod_(base, den, g)[0]
        lc = base.inv(den[-1])
        num = pc.scale(base, num, lc)
        den = pc.scale(base, den, lc)
        if pc.deg(num) <= 0 and pc.deg(den) <= 0:
            raise FieldError("sigma(t) must be a nonconstant rational function")
        self.sigma_num = tuple(num)
        self.sigma_den = tuple(den)

    def _make(self, num, den):
        base = self.base
        num = pc.trim(base, list(num))
        den = pc.trim(base, list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return ((), (base.one(),))
        g = pc.gcd(base, num, den)
        if pc.deg(g) > 0:
            num = pc.divmod_(base, num, g)[0]
            den = pc.divmod_(base, den, g)[0]
        lc = base.inv(den[-1])
        return (tuple(pc.scale(base, num, lc)), tuple(pc.scale(base, den, lc)))

    def from_polys(self, num, den):
        return self._make(num, den)

    def t(self):
        return self._make([self.base.zero(), self.base.one()], [self.base.one()])

    def zero(self):
        return ((), (self.base.one(),))

    def one(self):
        return ((self.base.one(),), (self.base.one(),))

    def add(self, a, b):
        base = self.base
        n = pc.add(base, pc.mul(base, list(a[0]), list(b[1])),
                   pc.mul(base, list(b[0]), list(a[1])))
        d = pc.mul(base, list(a[1]), list(b[1]))
        return self._make(n, d)

    def neg(self, a):
        return (tuple(pc.neg(self.base, list(a[0]))), a[1])

    def mul(self, a, b):
        base = self.base
        return self._make(pc.mul(base, list(a[0]), list(b[0])),
                          pc.mul(base, list(a[1]), list(b[1])))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return self._make(list(a[1]), list(a[0]))

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return not a[0]

    def from_int(self, n):
        v = self.base.from_int(n)
        return self._make([v], [self.base.one()])

    def sigma(self, a):
        base = self.base
        num = [base.sigma(c) for c in a[0]]
        den = [base.sigma(c) for c in a[1]]
        d = max(len(num), len(den), 1) - 1
        gn, gd = list(self.sigma_num), list(self.sigma_den)
        pow_n = [[base.one()]]
        pow_d = [[base.one()]]
        for _ in range(d):
            pow_n.append(pc.mul(base, pow_n[-1], gn))
            pow_d.append(pc.mul(base, pow_d[-1], gd))

        def plug(cs):
            acc = []
            for i, c in enumerate(cs):
                if base.is_zero(c):
                    continue
                term = pc.scale(base, pc.mul(base, pow_n[i], pow_d[d - i]), c)
                acc = pc.add(base, acc, term)
            return acc

        return self._make(plug(num), plug(den))

    def canon(self, a):
        return self._make([self.base.canon(c) for c in a[0]],
                          [self.base.canon(c) for c in a[1]])

    def sample(self, rng):
        base = self.base
        num = [base.sample(rng) for _ in range(rng.randint(1, 3))]
        den = [base.sample(rng) for _ in range(rng.randint(1, 2))]
        den = pc.trim(base, den)
        if not den:
            den = [base.one()]
        return self._make(num, den)

    def sigma_degree(self):
        return max(pc.deg(list(self.sigma_num)), pc.deg(list(self.sigma_den)))

    def is_inversive(self):
        if self.sigma_degree() >= 2:
            return False
        # Moebius substitution, bijective whenever the base map is
        return self.base.is_inversive()

    def characteristic(self):
        return self.base.characteristic()

    def scalar_to_json(self, a):
        return {"num": [self.base.scalar_to_json(c) for c in a[0]],
                "den": [self.base.scalar_to_json(c) for c in a[1]]}

    def scalar_from_json(self, s):
        return self._make([self.base.scalar_from_json(c) for c in s["num"]],
                          [self.base.scalar_from_json(c) for c in s["den"]])

    def descriptor(self):
        return {
            "kind": "Qt",
            "base": self.base.descriptor(),
            "sigma_t": {"num": [self.base.scalar_to_json(c) for c in self.sigma_num],
                        "den": [self.base.scalar_to_json(c) for c in self.sigma_den]},
        }


class ShiftField(DifferenceField):
    """k0(t_i : i >= min_index) with sigma shifting every index by one.

    Elements are (num, den) pairs of sparse multivariate polynomials over
    k0, coprime, with the denominator's leading coefficient one.  Values are
    immutable by convention; the field only records a monotone horizon of
    the largest index any computation has touched.
    """

    kind = "shift"

    def __init__(self, base, min_index=0):
        if isinstance(base, (FunctionField, ShiftField)):
            raise FieldError("shift-field base must be Q or a finite field")
        self.base = base
        self.min_index = min_index
        self.horizon = min_index  # high-water mark, append-only

    def _note(self, f):
        vs = mp.variables(f)
        if vs:
            lo, hi = min(vs), max(vs)
            if lo < self.min_index:
                raise FieldError(
                    f"variable t_{lo} below this field's minimal index {self.min_index}")
            if hi > self.horizon:
                self.horizon = hi

    def _make(self, num, den):
        base = self.base
        if mp.is_zero(den):
            raise ZeroDivisionError("zero denominator")
        if mp.is_zero(num):
            return ({}, mp.const(base, base.one()))
        g = mp.gcd(base, num, den)
        if not mp.is_const(g):
            num = mp.exact_div(base, num, g)
            den = mp.exact_div(base, den, g)
        else:
            c = mp.const_value(base, g)
            if not base.eq(c, base.one()):
                num = mp.scale(base, num, base.inv(c))
                den = mp.scale(base, den, base.inv(c))
        _, lc = mp.leading(den)
        if not base.eq(lc, base.one()):
            ilc = base.inv(lc)
            num = mp.scale(base, num, ilc)
            den = mp.scale(base, den, ilc)
        self._note(num)
        self._note(den)
        return (num, den)

    def t(self, i=0):
        if i < self.min_index:
            raise FieldError(f"t_{i} is below the minimal index {self.min_index}")
        return self._make(mp.var(self.base, i), mp.const(self.base, self.base.one()))

    def from_poly(self, num):
        return self._make(num, mp.const(self.base, self.base.one()))

    def zero(self):
        return ({}, mp.const(self.base, self.base.one()))

    def one(self):
        c = mp.const(self.base, self.base.one())
        return (c, dict(c))

    def add(self, a, b):
        base = self.base
        n = mp.add(base, mp.mul(base, a[0], b[1]), mp.mul(base, b[0], a[1]))
        return self._make(n, mp.mul(base, a[1], b[1]))

    def neg(self, a):
        return (mp.neg(self.base, a[0]), a[1])

    def mul(self, a, b):
        base = self.base
        return self._make(mp.mul(base, a[0], b[0]), mp.mul(base, a[1], b[1]))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        return self._make(dict(a[1]), dict(a[0]))

    def eq(self, a, b):
        return mp.eq(self.base, a[0], b[0]) and mp.eq(self.base, a[1], b[1])

    def is_zero(self, a):
        return mp.is_zero(a[0])

    def from_int(self, n):
        return self._make(mp.const(self.base, self.base.from_int(n)),
                          mp.const(self.base, self.base.one()))

    def sigma(self, a):
        base = self.base
        out = []
        for f in a:
            f = mp.shift_vars(f, 1)
            f = mp.map_coeffs(base, f, base.sigma)
            out.append(f)
        return self._make(out[0], out[1])

    def canon(self, a):
        base = self.base
        return self._make(mp.map_coeffs(base, a[0], base.canon),
                          mp.map_coeffs(base, a[1], base.canon))

    def sample(self, rng):
        base = self.base
        num = {}
        for _ in range(rng.randint(1, 3)):
            v = rng.randint(self.min_index, self.min_index + 2)
            e = rng.randint(0, 2)
            m = ((v, e),) if e else ()
            num = mp.add(base, num, {m: base.sample(rng)})
        den = mp.const(base, base.one())
        if rng.random() < 0.3:
            v = rng.randint(self.min_index, self.min_index + 2)
            den = mp.add(base, mp.var(base, v), mp.const(base, base.one()))
        if mp.is_zero(num):
            num = mp.const(base, base.one())
        return self._make(num, den)

    def max_index(self, a):
        vs = mp.variables(a[0]) | mp.variables(a[1])
        return max(vs) if vs else None

    def is_inversive(self):
        return False

    def characteristic(self):
        return self.base.characteristic()

    def scalar_to_json(self, a):
        def enc(f):
            return [[[list(ve) for ve in m], self.base.scalar_to_json(c)]
                    for m, c in mp.to_terms(f)]

        return {"num": enc(a[0]), "den": enc(a[1])}

    def scalar_from_json(self, s):
        def dec(terms):
            f = {}
            for m, c in terms:
                mono = tuple(sorted((int(v), int(e)) for v, e in m))
                f[mono] = self.base.scalar_from_json(c)
            return f

        return self._make(dec(s["num"]), dec(s["den"]))

    def descriptor(self):
        return {"kind": "shift", "base": self.base.descriptor(),
                "min_index": self.min_index}


def field_make(descriptor):
    """Build and validate a difference field from a JSON-style descriptor."""
    if isinstance(descriptor, DifferenceField):
        return descriptor
    kind = descriptor.get("kind")
    if kind == "Q":
        return Rationals()
    if kind == "Fq":
        p = descriptor["p"]
        m = descriptor.get("frobenius_power", 1)
        defpoly = descriptor.get("defpoly")
        if defpoly:
            trimmed = list(defpoly)
            while trimmed and trimmed[-1] % p == 0:
                trimmed.pop()
            if len(trimmed) > 2:
                return GaloisField(p, defpoly, m)
        return PrimeField(p, m)
    if kind == "Qt":
        base = field_make(descriptor.get("base", {"kind": "Q"}))
        st = descriptor["sigma_t"]
        num = [base.scalar_from_json(c) for c in st["num"]]
        den = [base.scalar_from_json(c) for c in st.get("den", ["1"])]
        return FunctionField(base, num, den)
    if kind == "shift":
        if "base" in descriptor:
            base = field_make(descriptor["base"])
        else:
            base = PrimeField(descriptor["p"], descriptor.get("frobenius_power", 1))
        return ShiftField(base, descriptor.get("min_index", 0))
    raise FieldError(f"unknown field kind {kind!r}")


def sigma_apply(field, x):
    """Apply the field endomorphism to a canonical element."""
    field.check_canonical(x)
    return field.sigma(x)


def is_inversive(field):
    """Structural surjectivity decision for the supported descriptors."""
    return field.is_inversive()
