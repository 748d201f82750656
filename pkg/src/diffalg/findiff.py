"""Finite-dimensional commutative difference algebras over a difference field.

An algebra is given by structure constants, a unit vector and a semilinear
endomorphism matrix.  This module hosts the separability and etale
predicates, idempotent enumeration, and the strong-core engine: base-change
to a splitting extension, the span of periodic idempotents there, and exact
linear descent back to the ground field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import random

from . import _linalg as la
from . import _polycore as pc
from .exactfield import GaloisField, PrimeField
from .poly import Poly, factor_over_finite_field


class RestrictedAutomationError(RuntimeError):
    """Full automation needs a finite base field or supplied idempotents."""


class ZeroRingError(ArithmeticError):
    """A construction collapsed to the zero ring."""


class CompatibilityError(ValueError):
    """Base-change data with mismatched endomorphisms."""


class FinSigmaAlgebra:
    """Commutative unital algebra with a semilinear endomorphism.

    mul[i][j] is the coordinate vector of e_i * e_j; sigma[i][j] is the
    i-th coordinate of sigma(e_j), so columns of sigma are the images of
    basis vectors.  sigma acts on arbitrary vectors semilinearly:
    sigma(sum v_j e_j) = sum sigma_base(v_j) sigma(e_j).
    """

    def __init__(self, base, mul, unit, sigma):
        self.base = base
        self.dim = len(unit)
        self.mul = mul
        self.unit = list(unit)
        self.sigma = [list(r) for r in sigma]

    # -- element helpers ---------------------------------------------------

    def zero_vec(self):
        return [self.base.zero()] * self.dim

    def basis_vec(self, i):
        v = self.zero_vec()
        v[i] = self.base.one()
        return v

    def vec_eq(self, u, v):
        return all(self.base.eq(a, b) for a, b in zip(u, v))

    def vec_is_zero(self, v):
        return all(self.base.is_zero(a) for a in v)

    def scalar_mul(self, c, v):
        return [self.base.mul(c, a) for a in v]

    def vec_add(self, u, v):
        return [self.base.add(a, b) for a, b in zip(u, v)]

    def vec_sub(self, u, v):
        return [self.base.sub(a, b) for a, b in zip(u, v)]

    def multiply(self, u, v):
        k = self.base
        out = self.zero_vec()
        for i, a in enumerate(u):
            if k.is_zero(a):
                continue
            for j, b in enumerate(v):
                if k.is_zero(b):
                    continue
                c = k.mul(a, b)
                row = self.mul[i][j]
                for t in range(self.dim):
                    if not k.is_zero(row[t]):
                        out[t] = k.add(out[t], k.mul(c, row[t]))
        return out

    def power(self, v, e):
        acc = list(self.unit)
        base = list(v)
        while e:
            if e & 1:
                acc = self.multiply(acc, base)
            base = self.multiply(base, base)
            e >>= 1
        return acc

    def apply_sigma(self, v):
        k = self.base
        out = self.zero_vec()
        for j, c in enumerate(v):
            if k.is_zero(c):
                continue
            sc = k.sigma(c)
            for i in range(self.dim):
                if not k.is_zero(self.sigma[i][j]):
                    out[i] = k.add(out[i], k.mul(sc, self.sigma[i][j]))
        return out

    def is_idempotent(self, v):
        return self.vec_eq(self.multiply(v, v), v)

    def evaluate_poly(self, f: Poly, v, unit=None):
        """f(v) inside the algebra, the constant term times the given unit."""
        unit = self.unit if unit is None else unit
        acc = self.zero_vec()
        for c in reversed(list(f.coeffs)):
            acc = self.multiply(acc, v)
            acc = self.vec_add(acc, self.scalar_mul(c, unit))
        return acc

    def mult_operator(self, v):
        """Matrix of multiplication by v."""
        cols = [self.multiply(v, self.basis_vec(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    # -- serialization -----------------------------------------------------

    def to_json(self):
        enc = self.base.scalar_to_json
        return {
            "base": self.base.descriptor(),
            "dim": self.dim,
            "mul": [[[enc(c) for c in self.mul[i][j]] for j in range(self.dim)]
                    for i in range(self.dim)],
            "unit": [enc(c) for c in self.unit],
            "sigma": [[enc(c) for c in row] for row in self.sigma],
        }

    @staticmethod
    def from_json(data, base=None):
        from .exactfield import field_make

        base = base if base is not None else field_make(data["base"])
        dec = base.scalar_from_json
        mul = [[[dec(c) for c in cell] for cell in row] for row in data["mul"]]
        unit = [dec(c) for c in data["unit"]]
        sigma = [[dec(c) for c in row] for row in data["sigma"]]
        return FinSigmaAlgebra(base, mul, unit, sigma)


@dataclass
class ValidationReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


@dataclass
class Idempotent:
    coords: list
    primitive: bool = False


class SigmaAlgebraMorphism:
    """k-linear map given by a (target.dim x source.dim) matrix."""

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = [list(r) for r in matrix]

    def apply(self, v):
        return la.mat_vec(self.source.base, self.matrix, v)

    def column(self, j):
        return [self.matrix[i][j] for i in range(len(self.matrix))]

    def validate(self):
        src, tgt = self.source, self.target
        k = src.base
        violations = []
        if not tgt.vec_eq(self.apply(src.unit), tgt.unit):
            violations.append(("unit", None))
        for i in range(src.dim):
            for j in range(i, src.dim):
                lhs = self.apply(src.mul[i][j])
                rhs = tgt.multiply(self.column(i), self.column(j))
                if not tgt.vec_eq(lhs, rhs):
                    violations.append(("multiplicative", (i, j)))
        for j in range(src.dim):
            lhs = self.apply([src.sigma[i][j] for i in range(src.dim)])
            rhs = tgt.apply_sigma(self.column(j))
            if not tgt.vec_eq(lhs, rhs):
                violations.append(("sigma-square", j))
        return ValidationReport(not violations, violations)


@dataclass
class PeriodicityResult:
    status: str          # "periodic" | "nonperiodic" | "unknown"
    period: int | None = None
    reason: str | None = None
    steps: int = 0

    def is_periodic(self):
        return self.status == "periodic"


@dataclass
class CoreResult:
    algebra: FinSigmaAlgebra
    inclusion: SigmaAlgebraMorphism
    complete: bool
    span: la.SpanBasis


def algebra_validate(A: FinSigmaAlgebra) -> ValidationReport:
    """Check commutativity, associativity, the unit law and that sigma is a
    unital, multiplicative, semilinear endomorphism."""
    k = A.base
    n = A.dim
    violations = []
    for i in range(n):
        for j in range(i + 1, n):
            if not A.vec_eq(A.mul[i][j], A.mul[j][i]):
                violations.append(("commutativity", (i, j)))
    for i in range(n):
        if not A.vec_eq(A.multiply(A.unit, A.basis_vec(i)), A.basis_vec(i)):
            violations.append(("unit-law", i))
    for i in range(n):
        for j in range(n):
            ij = A.mul[i][j]
            for l in range(n):
                left = A.multiply(ij, A.basis_vec(l))
                right = A.multiply(A.basis_vec(i), A.mul[j][l])
                if not A.vec_eq(left, right):
                    violations.append(("associativity", (i, j, l)))
    if not A.vec_eq(A.apply_sigma(A.unit), A.unit):
        violations.append(("sigma-unit", None))
    for i in range(n):
        for j in range(i, n):
            lhs = A.apply_sigma(A.mul[i][j])
            rhs = A.multiply(A.apply_sigma(A.basis_vec(i)), A.apply_sigma(A.basis_vec(j)))
            if not A.vec_eq(lhs, rhs):
                violations.append(("sigma-multiplicative", (i, j)))
    return ValidationReport(not violations, violations)


def is_sigma_separable(A: FinSigmaAlgebra) -> bool:
    """The images of a basis stay linearly independent over the base."""
    return la.rank(A.base, A.sigma) == A.dim


def is_sigma_reduced(A: FinSigmaAlgebra) -> bool:
    """Trivial kernel of the semilinear endomorphism, decided by the rank of
    the basis-image family over the base field.  Exact over inversive bases
    and a sound sufficient criterion over the others."""
    return la.rank(A.base, A.sigma) == A.dim


def trace_gram_matrix(A: FinSigmaAlgebra):
    k = A.base
    n = A.dim
    # trace of multiplication by e_m
    tr = []
    for m in range(n):
        acc = k.zero()
        for t in range(n):
            acc = k.add(acc, A.mul[m][t][t])
        tr.append(acc)
    gram = [[k.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = k.zero()
            for m in range(n):
                c = A.mul[i][j][m]
                if not k.is_zero(c):
                    acc = k.add(acc, k.mul(c, tr[m]))
            gram[i][j] = acc
            gram[j][i] = acc
    return gram


def is_etale(A: FinSigmaAlgebra) -> bool:
    """Nondegeneracy of the trace bilinear form."""
    return not A.base.is_zero(la.det(A.base, trace_gram_matrix(A)))


def is_strongly_sigma_etale(A: FinSigmaAlgebra) -> bool:
    return is_etale(A) and is_sigma_separable(A)


def minimal_polynomial(A: FinSigmaAlgebra, v, unit=None) -> Poly:
    """Minimal polynomial of v in the unital subalgebra generated by v."""
    unit = A.unit if unit is None else unit
    k = A.base
    span = la.SpanBasis(k, A.dim)
    powers = [list(unit)]
    span.add(unit)
    cur = list(unit)
    while True:
        cur = A.multiply(cur, v)
        coords = _coords_in(k, powers, cur)
        if coords is not None:
            return Poly.make(k, [k.neg(c) for c in coords] + [k.one()])
        powers.append(list(cur))
        span.add(cur)


def _coords_in(k, vectors, target):
    if not vectors:
        return [] if all(k.is_zero(c) for c in target) else None
    m = [[vectors[j][i] for j in range(len(vectors))] for i in range(len(vectors[0]))]
    return la.solve(k, m, target)


def _is_finite_base(base):
    return isinstance(base, (PrimeField, GaloisField))


def primitive_idempotents(A: FinSigmaAlgebra, supplied=None):
    """Complete list of primitive idempotents: orthogonal, summing to one.

    Over a finite base this is fully automatic through the subalgebra of
    q-power-fixed elements, whose elements have squarefree minimal
    polynomials that split over the base; splitting by partial-fraction
    idempotent lifts then terminates with the primitive list.  Over other
    bases a complete orthogonal decomposition must be supplied.
    """
    k = A.base
    if supplied is not None:
        _check_supplied_idempotents(A, supplied)
        return [Idempotent(list(e), primitive=True) for e in supplied]
    if not _is_finite_base(k):
        raise RestrictedAutomationError(
            "idempotent enumeration needs a finite base field or a supplied splitting")
    q = k.order
    # fixed-point subalgebra of x -> x^q
    phi_cols = [A.power(A.basis_vec(i), q) for i in range(A.dim)]
    m = [[k.sub(phi_cols[j][i], k.one() if i == j else k.zero())
          for j in range(A.dim)] for i in range(A.dim)]
    fixed = la.nullspace(k, m)
    prims = []
    _split_fixed_factor(A, A.unit, fixed, prims)
    if len(prims) != len(fixed):
        raise AssertionError("primitive idempotent count mismatch")
    prims.sort(key=lambda v: repr([k.scalar_to_json(c) for c in v]))
    return [Idempotent(v, primitive=True) for v in prims]


def _check_supplied_idempotents(A, supplied):
    k = A.base
    total = A.zero_vec()
    for i, e in enumerate(supplied):
        if not A.is_idempotent(e):
            raise ValueError(f"supplied element {i} is not idempotent")
        if A.vec_is_zero(e):
            raise ValueError(f"supplied element {i} is zero")
        total = A.vec_add(total, e)
        for j in range(i):
            if not A.vec_is_zero(A.multiply(e, supplied[j])):
                raise ValueError(f"supplied elements {j},{i} are not orthogonal")
    if not A.vec_eq(total, A.unit):
        raise ValueError("supplied idempotents do not sum to the unit")


def _split_fixed_factor(A, unit_vec, basis, prims):
    """Recursively split a factor of the fixed-point subalgebra."""
    k = A.base
    if len(basis) == 1:
        prims.append(list(unit_vec))
        return
    splitter = None
    minpoly = None
    for b in basis:
        m = minimal_polynomial(A, b, unit=unit_vec)
        if m.degree() >= 2:
            splitter, minpoly = b, m
            break
    if splitter is None:
        raise AssertionError("fixed-point factor of dim > 1 with no splitting element")
    pieces = factor_over_finite_field(minpoly)
    parts = []
    for g, mult in pieces.factors:
        if g.degree() != 1 or mult != 1:
            raise AssertionError("fixed-point element with non-split minimal polynomial")
        root = k.neg(g.coeffs[0])
        # partial-fraction idempotent lift: h(x) = prod (x - r')/(r - r')
        h = Poly.make(k, [k.one()])
        for g2, _ in pieces.factors:
            r2 = k.neg(g2.coeffs[0])
            if k.eq(r2, root):
                continue
            num = Poly.make(k, [k.neg(r2), k.one()])
            h = h * num.scale(k.inv(k.sub(root, r2)))
        e = A.evaluate_poly(h, splitter, unit=unit_vec)
        parts.append(e)
    for e in parts:
        span = la.SpanBasis(k, A.dim)
        for b in basis:
            span.add(A.multiply(e, b))
        _split_fixed_factor(A, e, span.basis(), prims)


def is_periodic(A: FinSigmaAlgebra, v, horizon=None) -> PeriodicityResult:
    """Decide whether the sigma-orbit of v returns to v.

    Detects the return, a zero hit, or entry into a cycle missing v; returns
    unknown only when the horizon is exhausted first.
    """
    if horizon is None:
        horizon = _default_horizon(A.dim)
    seen = [list(v)]
    cur = list(v)
    for step in range(1, horizon + 1):
        cur = A.apply_sigma(cur)
        if A.vec_eq(cur, v):
            return PeriodicityResult("periodic", period=step, steps=step)
        if A.vec_is_zero(cur):
            return PeriodicityResult("nonperiodic", reason="orbit-hits-zero", steps=step)
        for prev in seen[1:]:
            if A.vec_eq(cur, prev):
                return PeriodicityResult("nonperiodic", reason="orbit-cycles-without-start",
                                         steps=step)
        seen.append(list(cur))
    return PeriodicityResult("unknown", steps=horizon)


def _default_horizon(dim):
    h = 1
    for i in range(1, dim + 1):
        h *= i
        if h >= 10_000:
            return 10_000
    return h


def sigma_subalgebra_generated(A: FinSigmaAlgebra, gens):
    """Smallest sigma-stable unital subalgebra containing the generators."""
    k = A.base
    span = la.SpanBasis(k, A.dim)
    span.add(A.unit)
    queue = [list(g) for g in gens]
    for g in queue:
        span.add(g)
    changed = True
    while changed:
        changed = False
        rows = span.basis()
        for v in rows:
            s = A.apply_sigma(v)
            if span.add(s):
                changed = True
        rows = span.basis()
        for i in range(len(rows)):
            for j in range(i, len(rows)):
                p = A.multiply(rows[i], rows[j])
                if span.add(p):
                    changed = True
    return _subalgebra_on_span(A, span)


def _subalgebra_on_span(A, span):
    """Package an echelon span that is closed under product and sigma."""
    k = A.base
    basis = span.basis()
    d = len(basis)
    mul = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            coords = span.coordinates(A.multiply(basis[i], basis[j]))
            if coords is None:
                raise AssertionError("span not multiplicatively closed")
            mul[i][j] = coords
    unit = span.coordinates(A.unit)
    if unit is None:
        raise AssertionError("span does not contain the unit")
    sig = [[k.zero()] * d for _ in range(d)]
    for j in range(d):
        coords = span.coordinates(A.apply_sigma(basis[j]))
        if coords is None:
            raise AssertionError("span not sigma-stable")
        for i in range(d):
            sig[i][j] = coords[i]
    sub = FinSigmaAlgebra(k, mul, unit, sig)
    matrix = [[basis[j][i] for j in range(d)] for i in range(A.dim)]
    return sub, SigmaAlgebraMorphism(sub, A, matrix)


def tensor_product(A: FinSigmaAlgebra, B: FinSigmaAlgebra) -> FinSigmaAlgebra:
    """Structure constants multiply componentwise; sigma is the Kronecker
    product of the factors' matrices."""
    if A.base != B.base:
        raise TypeError("tensor factors live over different base fields")
    k = A.base
    na, nb = A.dim, B.dim
    n = na * nb

    def idx(i, j):
        return i * nb + j

    mul = [[None] * n for _ in range(n)]
    for i1 in range(na):
        for j1 in range(nb):
            for i2 in range(na):
                for j2 in range(nb):
                    out = [k.zero()] * n
                    pa = A.mul[i1][i2]
                    pb = B.mul[j1][j2]
                    for m1 in range(na):
                        if k.is_zero(pa[m1]):
                            continue
                        for m2 in range(nb):
                            if k.is_zero(pb[m2]):
                                continue
                            out[idx(m1, m2)] = k.mul(pa[m1], pb[m2])
                    mul[idx(i1, j1)][idx(i2, j2)] = out
    unit = [k.zero()] * n
    for i in range(na):
        for j in range(nb):
            unit[idx(i, j)] = k.mul(A.unit[i], B.unit[j])
    sig = [[k.zero()] * n for _ in range(n)]
    for i1 in range(na):
        for j1 in range(nb):
            for i2 in range(na):
                for j2 in range(nb):
                    sig[idx(i1, j1)][idx(i2, j2)] = k.mul(A.sigma[i1][i2], B.sigma[j1][j2])
    return FinSigmaAlgebra(k, mul, unit, sig)


def factor_embeddings(A, B):
    """The canonical morphisms A -> A (x) B and B -> A (x) B."""
    k = A.base
    T = tensor_product(A, B)
    nb = B.dim
    left = [[k.zero()] * A.dim for _ in range(T.dim)]
    for i in range(A.dim):
        for j in range(nb):
            if not k.is_zero(B.unit[j]):
                left[i * nb + j][i] = B.unit[j]
    right = [[k.zero()] * B.dim for _ in range(T.dim)]
    for j in range(B.dim):
        for i in range(A.dim):
            if not k.is_zero(A.unit[i]):
                right[i * nb + j][j] = A.unit[i]
    return T, SigmaAlgebraMorphism(A, T, left), SigmaAlgebraMorphism(B, T, right)


def quotient_by_sigma_ideal(A: FinSigmaAlgebra, gens):
    """Quotient by the sigma-ideal generated by gens, with the projection."""
    k = A.base
    span = la.SpanBasis(k, A.dim)
    for g in gens:
        span.add(list(g))
    changed = True
    while changed:
        changed = False
        for v in span.basis():
            if span.add(A.apply_sigma(v)):
                changed = True
        for v in span.basis():
            for i in range(A.dim):
                if span.add(A.multiply(v, A.basis_vec(i))):
                    changed = True
    if span.contains(A.unit):
        raise ZeroRingError("the sigma-ideal is the whole algebra")
    pivots = set(span.pivots)
    keep = [i for i in range(A.dim) if i not in pivots]
    d = len(keep)

    def project(v):
        r = span.reduce(v)
        return [r[i] for i in keep]

    def lift(i):
        return A.basis_vec(keep[i])

    mul = [[project(A.multiply(lift(i), lift(j))) for j in range(d)] for i in range(d)]
    unit = project(A.unit)
    sig = [[k.zero()] * d for _ in range(d)]
    for j in range(d):
        coords = project(A.apply_sigma(lift(j)))
        for i in range(d):
            sig[i][j] = coords[i]
    Q = FinSigmaAlgebra(k, mul, unit, sig)
    pm = [[k.zero()] * A.dim for _ in range(d)]
    for col in range(A.dim):
        coords = project(A.basis_vec(col))
        for i in range(d):
            pm[i][col] = coords[i]
    return Q, SigmaAlgebraMorphism(A, Q, pm)


def twist_and_psi(A: FinSigmaAlgebra):
    """The scalar-twisted algebra and the canonical map onto sigma's image.

    The twist re-reads every structure scalar through the base endomorphism;
    the canonical map sends the j-th twisted basis vector to sigma(e_j), and
    it is injective exactly when the algebra is sigma-separable.
    """
    k = A.base
    n = A.dim
    tw = k.sigma
    mul = [[[tw(c) for c in A.mul[i][j]] for j in range(n)] for i in range(n)]
    unit = [tw(c) for c in A.unit]
    sig = [[tw(c) for c in row] for row in A.sigma]
    twisted = FinSigmaAlgebra(k, mul, unit, sig)
    psi = SigmaAlgebraMorphism(twisted, A, [list(r) for r in A.sigma])
    return twisted, psi


# -- base change and splitting extensions ----------------------------------

_IRRED_CACHE = {}


def _irreducible_over_prime(p, degree):
    key = (p, degree)
    if key not in _IRRED_CACHE:
        fp = PrimeField(p)
        rng = random.Random(f"splitext-{p}-{degree}")
        _IRRED_CACHE[key] = tuple(pc.random_irreducible(fp, degree, p, rng))
    return _IRRED_CACHE[key]


def field_embedding(k, K):
    """An embedding k -> K commuting with both endomorphisms.

    Supports the finite-field descriptors; raises CompatibilityError when the
    endomorphisms disagree on the small field or no embedding exists.
    """
    if k == K:
        return lambda a: a
    if isinstance(k, PrimeField) and isinstance(K, (PrimeField, GaloisField)):
        if K.characteristic() != k.p:
            raise CompatibilityError("different characteristics")
        return lambda a: K.from_int(a)
    if isinstance(k, GaloisField) and isinstance(K, GaloisField):
        if K.p != k.p:
            raise CompatibilityError("different characteristics")
        if K.degree % k.degree != 0:
            raise CompatibilityError("no subfield embedding of the required degree")
        if (K.frobenius_power - k.frobenius_power) % k.degree != 0:
            raise CompatibilityError(
                "the larger field's endomorphism does not restrict to the base's")
        from .poly import roots

        defp = Poly.make(K, [K.from_int(c) for c in k.defpoly])
        rs = sorted((r for r, _ in roots(defp)), key=lambda t: tuple(t))
        if not rs:
            raise CompatibilityError("defining polynomial has no root in the target")
        root = rs[0]

        def embed(a, _root=root, _K=K, _k=k):
            acc = _K.zero()
            for c in reversed(a):
                acc = _K.add(_K.mul(acc, _root), _K.from_int(c))
            return acc

        return embed
    raise CompatibilityError(
        f"no embedding rule for {k.descriptor()} into {K.descriptor()}")


def splitting_extension(base, N):
    """The degree-N extension of a finite base with the same Frobenius power."""
    if N <= 1:
        return base, (lambda a: a)
    p = base.characteristic()
    s = getattr(base, "degree", 1)
    big = GaloisField(p, list(_irreducible_over_prime(p, s * N)),
                      frobenius_power=base.frobenius_power, _validated=True)
    return big, field_embedding(base, big)


def base_change(A: FinSigmaAlgebra, K, embed=None) -> FinSigmaAlgebra:
    """Read the same structure constants in a larger difference field."""
    k = A.base
    if embed is None:
        embed = field_embedding(k, K)
    n = A.dim
    mul = [[[embed(c) for c in A.mul[i][j]] for j in range(n)] for i in range(n)]
    unit = [embed(c) for c in A.unit]
    sig = [[embed(c) for c in row] for row in A.sigma]
    return FinSigmaAlgebra(K, mul, unit, sig)


def restrict_scalars(A: FinSigmaAlgebra, k) -> FinSigmaAlgebra:
    """Flatten an algebra over a finite extension K down to the subfield k."""
    K = A.base
    embed = field_embedding(k, K)
    gammas, coord_fn = _relative_basis(k, K, embed)
    N = len(gammas)
    n = A.dim
    dim = n * N

    def idx(i, t):
        return i * N + t

    def expand(vec_over_K):
        out = [k.zero()] * dim
        for i, c in enumerate(vec_over_K):
            if K.is_zero(c):
                continue
            for t, coef in enumerate(coord_fn(c)):
                out[idx(i, t)] = k.add(out[idx(i, t)], coef)
        return out

    mul = [[None] * dim for _ in range(dim)]
    for i in range(n):
        for t in range(N):
            for j in range(n):
                for u in range(N):
                    prod_scalar = K.mul(gammas[t], gammas[u])
                    vec = [K.mul(prod_scalar, c) for c in A.mul[i][j]]
                    mul[idx(i, t)][idx(j, u)] = expand(vec)
    unit = expand(A.unit)
    sig_cols = []
    for j in range(n):
        for u in range(N):
            v = [K.zero()] * n
            v[j] = gammas[u]
            sig_cols.append(expand(A.apply_sigma(v)))
    sig = [[sig_cols[c][r] for c in range(dim)] for r in range(dim)]
    return FinSigmaAlgebra(k, mul, unit, sig)


def _relative_basis(k, K, embed):
    """A k-basis of K and a coordinate function K -> k^N."""
    p = K.characteristic()
    fp = PrimeField(p)
    s = getattr(k, "degree", 1)
    S = getattr(K, "degree", 1)
    N = S // s
    k_basis = _fp_basis(k)
    emb_k = [embed(b) for b in k_basis]

    def flat(z):
        return list(z) if isinstance(z, tuple) else [z]

    span = la.SpanBasis(fp, S)
    gammas = []
    for g in _power_candidates(K):
        grew = False
        for eb in emb_k:
            if span.add(flat(K.mul(eb, g))):
                grew = True
        if grew:
            gammas.append(g)
        if len(gammas) == N:
            break
    if len(gammas) != N:
        raise AssertionError("failed to build a relative basis")
    cols = []
    for g in gammas:
        for eb in emb_k:
            cols.append(flat(K.mul(eb, g)))
    m = [[cols[c][r] for c in range(len(cols))] for r in range(S)]

    def coord_fn(z):
        sol = la.solve(fp, m, flat(z))
        if sol is None:
            raise AssertionError("relative coordinate solve failed")
        out = []
        for t in range(N):
            chunk = sol[t * s:(t + 1) * s]
            acc = k.zero()
            for c, b in zip(chunk, k_basis):
                acc = k.add(acc, k.mul(k.from_int(c), b))
            out.append(acc)
        return out

    return gammas, coord_fn


def _fp_basis(k):
    if isinstance(k, PrimeField):
        return [k.one()]
    return [k._lift([0] * i + [1]) for i in range(k.degree)]


def _power_candidates(K):
    if isinstance(K, PrimeField):
        yield K.one()
        return
    g = K.generator()
    cur = K.one()
    for _ in range(K.degree):
        yield cur
        cur = K.mul(cur, g)


# -- the strong core --------------------------------------------------------


def strong_core(A: FinSigmaAlgebra, supplied_idempotents=None) -> CoreResult:
    """Largest subalgebra spanned by periodic idempotent data, descended to
    the ground field.

    Over a finite base: base-change to the splitting extension, span the
    periodic idempotents there (organized through the atom decomposition of
    the induced dynamics on primitive idempotents), and descend by solving
    an exact linear system.  The completeness flag is True on that path.
    Otherwise the sigma-closure of periodic supplied idempotents gives an
    honest lower bound.
    """
    k = A.base
    if _is_finite_base(k):
        factors = _local_factors(A)
        N = 1
        for _, d, _, _ in factors:
            N = _lcm(N, d)
        K, embed = splitting_extension(k, N)
        AN = base_change(A, K, embed)
        prim_vecs = _split_primitives_over_extension(AN, K, embed, factors)
        atom_indicators = _periodic_idempotent_atoms(AN, prim_vecs)
        rational = _descend_span(A, K, embed, atom_indicators)
        span = la.SpanBasis(k, A.dim)
        for v in rational:
            span.add(v)
        sub, incl = _subalgebra_on_span(A, span)
        return CoreResult(sub, incl, True, span)
    gens = []
    for e in (supplied_idempotents or []):
        if not A.is_idempotent(e):
            raise ValueError("supplied element is not idempotent")
        if is_periodic(A, e).is_periodic():
            gens.append(list(e))
    sub, incl = sigma_subalgebra_generated(A, gens)
    span = la.SpanBasis(k, A.dim)
    for j in range(sub.dim):
        span.add(incl.column(j))
    return CoreResult(sub, incl, False, span)


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def _irreducible_part(A, v, unit):
    """(degree, full minimal polynomial) of an element of a local factor."""
    m = minimal_polynomial(A, v, unit=unit)
    fl = factor_over_finite_field(m)
    degs = {g.degree() for g, _ in fl.factors}
    if len(degs) != 1:
        raise AssertionError("local factor with non-primary minimal polynomial")
    return degs.pop(), m


def _local_factors(A):
    """(idempotent, residue degree, residue-primitive element, its minimal
    polynomial) for every local factor of the algebra."""
    k = A.base
    out = []
    for e in primitive_idempotents(A):
        span = la.SpanBasis(k, A.dim)
        for i in range(A.dim):
            span.add(A.multiply(e.coords, A.basis_vec(i)))
        basis = span.basis()
        d = 1
        best = None
        for b in basis:
            db, mb = _irreducible_part(A, b, e.coords)
            d = _lcm(d, db)
            if best is None or db > best[0]:
                best = (db, b, mb)
        if best[0] != d:
            rng = random.Random(0xA70A ^ A.dim)
            while True:
                v = A.zero_vec()
                for b in basis:
                    v = A.vec_add(v, A.scalar_mul(k.from_int(rng.randrange(k.order)), b))
                dv, mv = _irreducible_part(A, v, e.coords)
                if dv == d:
                    best = (d, v, mv)
                    break
        out.append((e.coords, d, best[1], best[2]))
    return out


def _split_primitives_over_extension(AN, K, embed, factors):
    """Primitive idempotents of the base-changed algebra, one partial-fraction
    lift per linear-power component of each factor's minimal polynomial."""
    prim_vecs = []
    for e, d, b, m in factors:
        eK = [embed(c) for c in e]
        if d == 1:
            prim_vecs.append(eK)
            continue
        bK = [embed(c) for c in b]
        mK = pc.trim(K, [embed(c) for c in m.coeffs])
        pieces = factor_over_finite_field(Poly(tuple(mK), K)).factors
        total = AN.zero_vec()
        for g, mult in pieces:
            if g.degree() != 1:
                raise AssertionError("minimal polynomial failed to split over the extension")
            qj = [K.one()]
            for _ in range(mult):
                qj = pc.mul(K, qj, list(g.coeffs))
            rest = pc.divmod_(K, mK, qj)[0]
            inv = pc.invmod(K, rest, qj)
            h = pc.mod(K, pc.mul(K, rest, inv), mK)
            eij = AN.evaluate_poly(Poly(tuple(h), K), bK, unit=eK)
            if AN.vec_is_zero(eij) or not AN.is_idempotent(eij):
                raise AssertionError("partial-fraction lift is not a proper idempotent")
            total = AN.vec_add(total, eij)
            prim_vecs.append(eij)
        if not AN.vec_eq(total, eK):
            raise AssertionError("lifted idempotents do not resum to the factor unit")
    prim_vecs.sort(key=lambda v: repr([K.scalar_to_json(c) for c in v]))
    return prim_vecs


def _periodic_idempotent_atoms(A, prim_vecs):
    """Indicator vectors of the atoms of the periodic-subset lattice.

    sigma sends each primitive idempotent to a subset-sum of primitive
    idempotents; periodic sums are exactly the unions of the returned atoms,
    so the atoms span the space of periodic idempotents.
    """
    k = A.base
    r = len(prim_vecs)
    supp = []
    for i, e in enumerate(prim_vecs):
        s = A.apply_sigma(e)
        T = []
        recon = A.zero_vec()
        for j, f in enumerate(prim_vecs):
            prod = A.multiply(f, s)
            if A.vec_eq(prod, f):
                T.append(j)
                recon = A.vec_add(recon, f)
            elif not A.vec_is_zero(prod):
                raise AssertionError("sigma image is not a sum of primitive idempotents")
        if not A.vec_eq(recon, s):
            raise AssertionError("sigma image failed idempotent reconstruction")
        supp.append(frozenset(T))
    # recurrent part
    U = frozenset(range(r))
    while True:
        U2 = frozenset(j for i in U for j in supp[i])
        if U2 == U:
            break
        U = U2
    if not U:
        return []
    pi = {}
    for j in U:
        owners = [i for i in U if j in supp[i]]
        if len(owners) != 1:
            raise AssertionError("recurrent primitive with non-unique predecessor")
        pi[j] = owners[0]
    omega = set()
    for start in U:
        cur = start
        seen = {}
        t = 0
        while cur not in seen:
            seen[cur] = t
            cur = pi[cur]
            t += 1
        # cur starts the cycle reached from start
        cycle = []
        c = cur
        while True:
            cycle.append(c)
            c = pi[c]
            if c == cur:
                break
        omega.update(cycle)
    rho_inv = {}
    for w in omega:
        rho_inv[pi[w]] = w  # pi(w) <- w means rho(w) = pi(w)
    anchors = {}
    for x in U:
        d = 0
        b = x
        while b not in omega:
            b = pi[b]
            d += 1
        a = b
        for _ in range(d):
            a = rho_inv[a]
        anchors[x] = a
    atoms = {}
    for x in U:
        atoms.setdefault(anchors[x], set()).add(x)
    out = []
    for w in sorted(atoms):
        vec = A.zero_vec()
        for i in atoms[w]:
            vec = A.vec_add(vec, prim_vecs[i])
        out.append(vec)
    return out


def _descend_span(A, K, embed, vectors_over_K):
    """Basis of the k-rational part of a K-subspace of the base-changed
    algebra, by expanding the membership equations over a relative basis."""
    k = A.base
    n = A.dim
    if K == k:
        span = la.SpanBasis(k, n)
        for v in vectors_over_K:
            span.add(v)
        return span.basis()
    if not vectors_over_K:
        return []
    constraints = la.nullspace(K, [list(v) for v in vectors_over_K])
    gammas, coord_fn = _relative_basis(k, K, embed)
    rows = []
    for w in constraints:
        expanded = [coord_fn(c) for c in w]
        for t in range(len(gammas)):
            rows.append([expanded[i][t] for i in range(n)])
    if not rows:
        return la.identity(k, n)
    sols = la.nullspace(k, rows)
    span = la.SpanBasis(k, n)
    for v in sols:
        span.add(v)
    return span.basis()
