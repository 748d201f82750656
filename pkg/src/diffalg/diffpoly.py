"""Finitely presented difference algebras as directed systems of truncations.

A presentation is a list of difference-polynomial generators over a base
field; the supported class is the one whose level-n reductions form a
confluent rewriting system of two rule shapes:

  * power rules      v^d -> r(v)   with r a polynomial in v of degree < d,
  * substitutions    v -> r        with r supported on strictly lower orders.

Rules propagate to all higher transforms of their variable.  Elements are
sparse polynomials in variables (j, i) = (declared variable, transform
order); the level-n algebra is spanned by the normal monomials of order at
most n, and sigma raises the level by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _exprs
from . import _linalg as la
from .exactfield import GaloisField, PrimeField
from .findiff import FinSigmaAlgebra, strong_core as _fin_strong_core
from .poly import Poly, factor_over_finite_field


class UnsupportedPresentationError(ValueError):
    pass


# elements: dict mapping monomials to scalars; a monomial is a sorted tuple
# of ((j, i), exp) pairs


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(m):
    return (sum(e for _, e in m), m)


class Presentation:
    """Parsed and validated presentation of k{y_1..y_m}/[generators]."""

    def __init__(self, base, var_names, generator_texts):
        if not isinstance(base, (PrimeField, GaloisField)) and base.characteristic() != 0:
            raise UnsupportedPresentationError("unsupported base field")
        self.base = base
        self.var_names = list(var_names)
        self.generator_texts = list(generator_texts)
        # per variable j: (start_order, degree, rhs coefficients low..deg-1)
        self.power_rules = {}
        # per variable j: (start_order, rhs element)
        self.sub_rules = {}
        for text in generator_texts:
            self._add_generator(text)
        self._check_consistency()

    # -- parsing -----------------------------------------------------------

    def parse(self, text):
        return _exprs.evaluate(text, _PresentationOps(self))

    def _add_generator(self, text):
        g = self.parse(text)
        if not g:
            return
        vs = sorted({v for m in g for v, _ in m})
        top = max(((sum(e for _, e in m), m) for m in g))[1]
        if len(top) != 1:
            raise UnsupportedPresentationError(
                f"generator {text!r} is not univariate-monomial-headed")
        (var, exp_) = top[0]
        k = self.base
        lead = g[top]
        rest = {m: k.neg(k.mul(c, k.inv(lead))) for m, c in g.items() if m != top}
        j, i = var
        if exp_ == 1:
            for m in rest:
                for (j2, i2), _ in m:
                    if i2 >= i:
                        raise UnsupportedPresentationError(
                            f"substitution in {text!r} does not lower the order")
            if j in self.sub_rules:
                raise UnsupportedPresentationError(
                    f"second substitution rule for variable {self.var_names[j]}")
            self.sub_rules[j] = (i, rest)
        else:
            coeffs = [k.zero()] * exp_
            for m, c in rest.items():
                if len(m) == 0:
                    coeffs[0] = c
                elif len(m) == 1 and m[0][0] == var and m[0][1] < exp_:
                    coeffs[m[0][1]] = c
                else:
                    raise UnsupportedPresentationError(
                        f"power rule in {text!r} has a mixed right-hand side")
            if j in self.power_rules:
                raise UnsupportedPresentationError(
                    f"second power rule for variable {self.var_names[j]}")
            self.power_rules[j] = (i, exp_, coeffs)

    def _check_consistency(self):
        # where both rules apply, the substituted value must satisfy the power rule
        for j, (si, rhs) in self.sub_rules.items():
            if j not in self.power_rules:
                continue
            pi, d, coeffs = self.power_rules[j]
            for probe in (max(si, pi), max(si, pi) + 1):
                v = self.var_element(j, probe)
                lhs = self.power(v, d)
                rhs_val = self.zero()
                for e, c in enumerate(self._power_rhs_coeffs(j, probe)):
                    rhs_val = self.add(rhs_val, self.scale(self.power(v, e), c))
                if not self.eq(lhs, rhs_val):
                    raise UnsupportedPresentationError(
                        "substitution and power rules are inconsistent "
                        f"(the ideal contains a unit) for {self.var_names[j]}")

    # -- rule access --------------------------------------------------------

    def _sub_rhs(self, j, i):
        rule = self.sub_rules.get(j)
        if rule is None or i < rule[0]:
            return None
        start, rhs = rule
        return self._shift(rhs, i - start)

    def _power_rhs_coeffs(self, j, i):
        start, d, coeffs = self.power_rules[j]
        k = self.base
        out = list(coeffs)
        for _ in range(i - start):
            out = [k.sigma(c) for c in out]
        return out

    def _has_power(self, j, i):
        rule = self.power_rules.get(j)
        return rule is not None and i >= rule[0]

    def shift_monotone(self):
        """True when every substitution right-hand side is constant, so sigma
        never lowers the minimal order of a nonconstant normal form."""
        for _start, rhs in self.sub_rules.values():
            if any(m for m in rhs):
                return False
        return True

    # -- element arithmetic --------------------------------------------------

    def zero(self):
        return {}

    def one(self):
        return {(): self.base.one()}

    def const(self, c):
        c = self.base.canon(c)
        return {} if self.base.is_zero(c) else {(): c}

    def var_element(self, j, i):
        return self.normalize({(((j, i), 1),): self.base.one()})

    def add(self, f, g):
        k = self.base
        out = dict(f)
        for m, c in g.items():
            s = k.add(out.get(m, k.zero()), c)
            if k.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return out

    def neg(self, f):
        return {m: self.base.neg(c) for m, c in f.items()}

    def sub(self, f, g):
        return self.add(f, self.neg(g))

    def scale(self, f, c):
        if self.base.is_zero(c):
            return {}
        return {m: self.base.mul(x, c) for m, x in f.items()}

    def mul(self, f, g):
        k = self.base
        out = {}
        for m1, c1 in f.items():
            for m2, c2 in g.items():
                m = _mono_mul(m1, m2)
                s = k.add(out.get(m, k.zero()), k.mul(c1, c2))
                if k.is_zero(s):
                    out.pop(m, None)
                else:
                    out[m] = s
        return self.normalize(out)

    def power(self, f, e):
        acc = self.one()
        while e:
            if e & 1:
                acc = self.mul(acc, f)
            f = self.mul(f, f)
            e >>= 1
        return acc

    def eq(self, f, g):
        if len(f) != len(g):
            return False
        return all(m in g and self.base.eq(c, g[m]) for m, c in f.items())

    def is_zero(self, f):
        return not f

    def normalize(self, f):
        """Apply substitutions, then cap exponents through power rules."""
        k = self.base
        # substitution pass
        while True:
            target = None
            for m in f:
                for (j, i), _ in m:
                    if self._sub_rhs(j, i) is not None:
                        target = (j, i)
                        break
                if target:
                    break
            if not target:
                break
            j, i = target
            rhs = self._sub_rhs(j, i)
            out = {}
            for m, c in f.items():
                e = dict(m).get((j, i), 0)
                if not e:
                    out2 = {m: c}
                else:
                    stripped = tuple((v, x) for v, x in m if v != (j, i))
                    term = {stripped: c}
                    rep = self._plain_power(rhs, e)
                    out2 = {}
                    for m1, c1 in term.items():
                        for m2, c2 in rep.items():
                            mm = _mono_mul(m1, m2)
                            s = k.add(out2.get(mm, k.zero()), k.mul(c1, c2))
                            if k.is_zero(s):
                                out2.pop(mm, None)
                            else:
                                out2[mm] = s
                for m2, c2 in out2.items():
                    s = k.add(out.get(m2, k.zero()), c2)
                    if k.is_zero(s):
                        out.pop(m2, None)
                    else:
                        out[m2] = s
            f = out
        # power pass
        while True:
            target = None
            for m in f:
                for (j, i), e in m:
                    if self._has_power(j, i) and e >= self.power_rules[j][1]:
                        target = (m, (j, i), e)
                        break
                if target:
                    break
            if not target:
                return f
            m, (j, i), e = target
            d = self.power_rules[j][1]
            c = f.pop(m)
            stripped = tuple((v, x) for v, x in m if v != (j, i))
            base_term = {_mono_mul(stripped, (((j, i), e - d),) if e - d else ()): c}
            rhs = {}
            for exp_, coef in enumerate(self._power_rhs_coeffs(j, i)):
                if k.is_zero(coef):
                    continue
                rhs[(((j, i), exp_),) if exp_ else ()] = coef
            add_in = {}
            for m1, c1 in base_term.items():
                for m2, c2 in rhs.items():
                    mm = _mono_mul(m1, m2)
                    s = k.add(add_in.get(mm, k.zero()), k.mul(c1, c2))
                    if k.is_zero(s):
                        add_in.pop(mm, None)
                    else:
                        add_in[mm] = s
            for m2, c2 in add_in.items():
                s = k.add(f.get(m2, k.zero()), c2)
                if k.is_zero(s):
                    f.pop(m2, None)
                else:
                    f[m2] = s

    def _plain_power(self, f, e):
        acc = {(): self.base.one()}
        k = self.base
        while e:
            if e & 1:
                out = {}
                for m1, c1 in acc.items():
                    for m2, c2 in f.items():
                        mm = _mono_mul(m1, m2)
                        s = k.add(out.get(mm, k.zero()), k.mul(c1, c2))
                        if k.is_zero(s):
                            out.pop(mm, None)
                        else:
                            out[mm] = s
                acc = out
            if e > 1:
                out = {}
                for m1, c1 in f.items():
                    for m2, c2 in f.items():
                        mm = _mono_mul(m1, m2)
                        s = k.add(out.get(mm, k.zero()), k.mul(c1, c2))
                        if k.is_zero(s):
                            out.pop(mm, None)
                        else:
                            out[mm] = s
                f = out
            e >>= 1
        return acc

    def _shift(self, f, steps):
        if steps == 0:
            return f
        k = self.base
        out = {}
        for m, c in f.items():
            mm = tuple(((j, i + steps), e) for (j, i), e in m)
            for _ in range(steps):
                c = k.sigma(c)
            out[tuple(sorted(mm))] = c
        return out

    def sigma(self, f):
        return self.normalize(self._shift(f, 1))

    # -- levels --------------------------------------------------------------

    def free_variables(self, n):
        """Normal-form variables of order <= n, with their exponent caps."""
        out = []
        for j in range(len(self.var_names)):
            for i in range(n + 1):
                if self._sub_rhs(j, i) is not None:
                    continue
                if not self._has_power(j, i):
                    raise UnsupportedPresentationError(
                        f"level {n} is not finite-dimensional: "
                        f"{self.var_names[j]} order {i} has no exponent cap")
                out.append(((j, i), self.power_rules[j][1]))
        return out

    def level_monomials(self, n):
        vars_caps = self.free_variables(n)
        monos = [()]
        for v, cap in vars_caps:
            monos = [_mono_mul(m, ((v, e),) if e else ()) for m in monos
                     for e in range(cap)]
        return sorted(monos, key=_mono_key)

    def level_dimension(self, n):
        return len(self.level_monomials(n))

    def min_order(self, f):
        orders = [i for m in f for (j, i), _ in m]
        return min(orders) if orders else None

    def max_order(self, f):
        orders = [i for m in f for (j, i), _ in m]
        return max(orders) if orders else None

    def to_json(self):
        return {"base": self.base.descriptor(), "vars": self.var_names,
                "gens": [{"poly": t} for t in self.generator_texts]}

    @staticmethod
    def from_json(data, base=None):
        from .exactfield import field_make

        base = base if base is not None else field_make(data["base"])
        return Presentation(base, data["vars"], [g["poly"] for g in data["gens"]])


class _PresentationOps:
    def __init__(self, pres):
        self.p = pres

    def from_int(self, n):
        return self.p.const(self.p.base.from_int(n))

    def add(self, a, b):
        return self.p.add(a, b)

    def sub(self, a, b):
        return self.p.sub(a, b)

    def mul(self, a, b):
        return self.p.mul(a, b)

    def div(self, a, b):
        if not self.p.is_zero(b) and len(b) == 1 and () in b:
            return self.p.scale(a, self.p.base.inv(b[()]))
        raise _exprs.ExpressionError("division only by constants")

    def neg(self, a):
        return self.p.neg(a)

    def pow(self, a, e):
        return self.p.power(a, e)

    def name(self, s):
        for j, vn in enumerate(self.p.var_names):
            if s.startswith(vn):
                tail = s[len(vn):]
                if tail.startswith("_"):
                    tail = tail[1:]
                if tail.isdigit():
                    return self.p.var_element(j, int(tail))
        raise _exprs.ExpressionError(f"unknown name {s!r}")

    def call(self, fname, args):
        if fname == "sigma":
            if len(args) == 1:
                return self.p.sigma(args[0])
            if len(args) == 2 and isinstance(args[1], int):
                v = args[0]
                for _ in range(args[1]):
                    v = self.p.sigma(v)
                return v
        raise _exprs.ExpressionError(f"unknown call {fname!r}")


@dataclass
class LevelAlgebra:
    """The level-n truncation with an explicit monomial basis."""

    pres: Presentation
    level: int
    monomials: list

    @staticmethod
    def make(pres, n):
        return LevelAlgebra(pres, n, pres.level_monomials(n))

    def dim(self):
        return len(self.monomials)

    def coords(self, f):
        idx = {m: t for t, m in enumerate(self.monomials)}
        out = [self.pres.base.zero()] * len(self.monomials)
        for m, c in f.items():
            if m not in idx:
                return None
            out[idx[m]] = c
        return out

    def element(self, coords):
        k = self.pres.base
        f = {}
        for c, m in zip(coords, self.monomials):
            if not k.is_zero(c):
                f[m] = c
        return f

    def includes(self, f):
        return self.coords(f) is not None


@dataclass
class TruncatedQuotient:
    """Directed system access: levels, inclusions (identity on normal forms)
    and sigma maps raising the level."""

    pres: Presentation
    levels: dict = field(default_factory=dict)

    def level(self, n):
        if n not in self.levels:
            self.levels[n] = LevelAlgebra.make(self.pres, n)
        return self.levels[n]


def truncate(pres: Presentation, n: int) -> LevelAlgebra:
    """Level-n truncation; raises if the level is not finite dimensional."""
    return LevelAlgebra.make(pres, n)


@dataclass
class IdempotentClassification:
    element: dict
    status: str            # "periodic" | "nonperiodic" | "unknown"
    period: int | None = None
    reason: str | None = None
    steps: int = 0


def _level_split_points(pres, n):
    """Roots of each free variable's defining polynomial; the level algebra
    is the tensor product of the split pieces."""
    k = pres.base
    points = []
    for (v, cap) in pres.free_variables(n):
        j, i = v
        coeffs = pres._power_rhs_coeffs(j, i)
        # f = v^cap - rhs(v)
        full = [k.neg(c) for c in coeffs] + [k.zero()] * (cap - len(coeffs))
        f = Poly.make(k, full[:cap] + [k.one()])
        fl = factor_over_finite_field(f)
        rs = []
        for g, mult in fl.factors:
            if g.degree() != 1 or mult != 1:
                raise UnsupportedPresentationError(
                    "level variable polynomial does not split separably over the base")
            rs.append(k.neg(g.coeffs[0]))
        points.append((v, cap, rs))
    return points


def level_primitive_idempotents(pres: Presentation, n: int):
    """Primitive idempotents of the level algebra, as element dicts."""
    k = pres.base
    points = _level_split_points(pres, n)
    prims = [pres.one()]
    for v, cap, rs in points:
        j, i = v
        x = pres.var_element(j, i)
        new = []
        for root in rs:
            ind = pres.one()
            for other in rs:
                if k.eq(other, root):
                    continue
                factor = pres.scale(pres.sub(x, pres.const(other)),
                                    k.inv(k.sub(root, other)))
                ind = pres.mul(ind, factor)
            for e in prims:
                w = pres.mul(e, ind)
                if not pres.is_zero(w):
                    new.append(w)
        prims = new
    return prims


def classify_idempotent(pres: Presentation, e, horizon: int) -> IdempotentClassification:
    """Orbit analysis with certificates: a return within the horizon, a zero
    hit, a cycle missing the start, or (for presentations whose rules never
    lower orders) a support shift past the start's largest order."""
    monotone = pres.shift_monotone()
    start_max = pres.max_order(e)
    seen = [e]
    cur = e
    for step in range(1, horizon + 1):
        cur = pres.sigma(cur)
        if pres.eq(cur, e):
            return IdempotentClassification(e, "periodic", period=step, steps=step)
        if pres.is_zero(cur):
            return IdempotentClassification(e, "nonperiodic", reason="orbit-hits-zero",
                                            steps=step)
        for prev in seen[1:]:
            if pres.eq(cur, prev):
                return IdempotentClassification(e, "nonperiodic",
                                                reason="orbit-cycles-without-start",
                                                steps=step)
        if monotone and start_max is not None:
            mo = pres.min_order(cur)
            if mo is not None and mo > start_max:
                return IdempotentClassification(e, "nonperiodic", reason="support-shift",
                                                steps=step)
        seen.append(cur)
    return IdempotentClassification(e, "unknown", steps=horizon)


def periodic_idempotents_truncated(pres: Presentation, n: int, horizon: int = 64):
    """Classified primitive idempotents of the level-n algebra, plus the
    constants zero and one."""
    out = [classify_idempotent(pres, pres.one(), horizon)]
    for e in level_primitive_idempotents(pres, n):
        out.append(classify_idempotent(pres, e, horizon))
    return out


@dataclass
class TruncatedCoreResult:
    basis: list               # element dicts spanning the core inside level n
    status: str               # "exact" | "lower-bound"
    window_vars: list
    algebra: FinSigmaAlgebra | None
    details: dict


def _variable_window(pres, n, horizon):
    """Split variables into recurrent (orbit support stays bounded) and
    transient (certified drifting) classes."""
    window = set()
    transient = []
    unknown = []
    monotone = pres.shift_monotone()
    for j in range(len(pres.var_names)):
        x = pres.var_element(j, 0)
        if pres.min_order(x) is None:
            continue
        orbit = [x]
        cur = x
        verdict = None
        for step in range(1, horizon + 1):
            cur = pres.sigma(cur)
            if pres.is_zero(cur) or pres.min_order(cur) is None:
                verdict = "recurrent"
                break
            if any(pres.eq(cur, prev) for prev in orbit):
                verdict = "recurrent"
                break
            if monotone and pres.min_order(cur) > n:
                verdict = "transient"
                break
            orbit.append(cur)
        if verdict == "recurrent":
            for f in orbit:
                for m in f:
                    for v, _ in m:
                        window.add(v)
        elif verdict == "transient":
            transient.append(j)
        else:
            unknown.append(j)
    return window, transient, unknown


def strong_core_truncated(pres: Presentation, n: int, horizon: int = 64) -> TruncatedCoreResult:
    """Span of periodic idempotent orbits inside the level-n algebra.

    Periodic elements live in the sigma-stable window subalgebra spanned by
    the recurrent variables, where the finite-dimensional engine takes over;
    the status is exact when every variable received a certificate.
    """
    window, transient, unknown = _variable_window(pres, n, horizon)
    window = {v for v in window if v[1] <= n}
    # close the window under sigma inside level n
    for _ in range(horizon):
        grew = False
        for v in sorted(window):
            img = pres.sigma(pres.var_element(*v))
            for m in img:
                for w, _ in m:
                    if w[1] <= n and w not in window:
                        window.add(w)
                        grew = True
        if not grew:
            break
    caps = dict(pres.free_variables(n))
    monos = [()]
    for v in sorted(window):
        if v not in caps:
            raise UnsupportedPresentationError("window variable outside the free basis")
        monos = [_mono_mul(m, ((v, e),) if e else ()) for m in monos
                 for e in range(caps[v])]
    monos = sorted(monos, key=_mono_key)
    k = pres.base
    idx = {m: t for t, m in enumerate(monos)}
    d = len(monos)

    def coords(f):
        out = [k.zero()] * d
        for m, c in f.items():
            if m not in idx:
                return None
            out[idx[m]] = c
        return out

    def elem(m):
        return {m: k.one()} if m else {(): k.one()}

    mul = [[None] * d for _ in range(d)]
    for a in range(d):
        for b in range(d):
            prod = pres.mul(elem(monos[a]), elem(monos[b]))
            cv = coords(prod)
            if cv is None:
                raise UnsupportedPresentationError("window is not multiplicatively closed")
            mul[a][b] = cv
    unit = coords(pres.one())
    sig = [[k.zero()] * d for _ in range(d)]
    for b in range(d):
        img = pres.sigma(elem(monos[b]))
        cv = coords(img)
        if cv is None:
            raise UnsupportedPresentationError("window is not sigma-stable")
        for a in range(d):
            sig[a][b] = cv[a]
    A = FinSigmaAlgebra(k, mul, unit, sig)
    core = _fin_strong_core(A)
    basis = []
    for j in range(core.algebra.dim):
        col = core.inclusion.column(j)
        basis.append(pres.normalize({m: c for m, c in zip(monos, col)
                                     if not k.is_zero(c)}))
    status = "exact" if not unknown and core.complete else "lower-bound"
    return TruncatedCoreResult(
        basis=basis, status=status,
        window_vars=sorted(window),
        algebra=core.algebra,
        details={"transient_vars": transient, "unknown_vars": unknown,
                 "window_dim": d})


def sigma_kernel_slice(pres: Presentation, n: int):
    """Basis of the kernel of sigma on the level-n algebra."""
    k = pres.base
    level_n = LevelAlgebra.make(pres, n)
    level_up = LevelAlgebra.make(pres, n + 1)
    cols = []
    for m in level_n.monomials:
        img = pres.sigma({m: k.one()} if m else pres.one())
        cv = level_up.coords(img)
        if cv is None:
            raise UnsupportedPresentationError("sigma image escaped the next level")
        cols.append(cv)
    matrix = [[cols[c][r] for c in range(len(cols))] for r in range(level_up.dim())]
    null = la.nullspace(k, matrix)
    if not hasattr(k, "sigma_inverse"):
        raise UnsupportedPresentationError("base field without invertible endomorphism")
    out = []
    for w in null:
        v = [k.sigma_inverse(c) for c in w]
        out.append(level_n.element(v))
    return out
