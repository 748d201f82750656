"""Dense univariate polynomial arithmetic over a field object.

Polynomials are plain lists of field elements, low degree first, with no
trailing zeros ([] is the zero polynomial).  Every function takes the
coefficient field as its first argument; the field supplies exact element
operations (zero, one, add, sub, neg, mul, inv, eq, is_zero, from_int).
This module is internal plumbing shared by the field constructors, the
public polynomial layer and the tower machinery.
"""

from __future__ import annotations


def trim(k, c):
    c = list(c)
    while c and k.is_zero(c[-1]):
        c.pop()
    return c


def deg(c):
    return len(c) - 1


def is_zero(c):
    return not c


def const(k, a):
    return trim(k, [a])


def x_poly(k):
    return [k.zero(), k.one()]


def eq(k, f, g):
    if len(f) != len(g):
        return False
    return all(k.eq(a, b) for a, b in zip(f, g))


def add(k, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else k.zero()
        b = g[i] if i < len(g) else k.zero()
        out.append(k.add(a, b))
    return trim(k, out)


def neg(k, f):
    return [k.neg(a) for a in f]


def sub(k, f, g):
    return add(k, f, neg(k, g))


def scale(k, f, a):
    if k.is_zero(a):
        return []
    return trim(k, [k.mul(a, c) for c in f])


def mul(k, f, g):
    if not f or not g:
        return []
    out = [k.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if k.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = k.add(out[i + j], k.mul(a, b))
    return trim(k, out)


def shift(k, f, n):
    """Multiply by x^n."""
    if not f:
        return []
    return [k.zero()] * n + list(f)


def divmod_(k, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [k.zero()] * max(0, len(f) - len(g) + 1)
    inv_lc = k.inv(g[-1])
    while len(f) >= len(g) and f:
        c = k.mul(f[-1], inv_lc)
        d = len(f) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            f[d + i] = k.sub(f[d + i], k.mul(c, b))
        f = trim(k, f)
    return trim(k, q), f


def mod(k, f, g):
    return divmod_(k, f, g)[1]


def monic(k, f):
    if not f:
        return []
    return scale(k, f, k.inv(f[-1]))


def gcd(k, f, g):
    while g:
        f, g = g, mod(k, f, g)
    return monic(k, f)


def xgcd(k, f, g):
    """Return (d, s, t) with s*f + t*g = d and d monic (or zero)."""
    r0, r1 = list(f), list(g)
    s0, s1 = [k.one()], []
    t0, t1 = [], [k.one()]
    while r1:
        q, r = divmod_(k, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(k, s0, mul(k, q, s1))
        t0, t1 = t1, sub(k, t0, mul(k, q, t1))
    if not r0:
        return [], s0, t0
    c = k.inv(r0[-1])
    return scale(k, r0, c), scale(k, s0, c), scale(k, t0, c)


def invmod(k, f, g):
    d, s, _ = xgcd(k, f, g)
    if deg(d) != 0:
        raise ZeroDivisionError("element not invertible modulo the given polynomial")
    return mod(k, s, g)


def evaluate(k, f, a):
    acc = k.zero()
    for c in reversed(f):
        acc = k.add(k.mul(acc, a), c)
    return acc


def compose(k, f, g):
    """f(g(x))."""
    acc = []
    for c in reversed(f):
        acc = add(k, mul(k, acc, g), const(k, c))
    return acc


def derivative(k, f):
    out = []
    for i in range(1, len(f)):
        out.append(k.mul(k.from_int(i), f[i]))
    return trim(k, out)


def pow_mod(k, f, e, m):
    """f^e mod m for a nonnegative integer e."""
    result = const(k, k.one())
    base = mod(k, f, m)
    while e:
        if e & 1:
            result = mod(k, mul(k, result, base), m)
        base = mod(k, mul(k, base, base), m)
        e >>= 1
    return result


def _frob_power(k, g, q, m):
    """g^(q) mod m, the q-power Frobenius step."""
    return pow_mod(k, g, q, m)


def is_irreducible(k, f, q):
    """Rabin irreducibility test over a finite field with q elements.

    Assumes f nonzero; constants are not irreducible.
    """
    f = monic(k, f)
    n = deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    x = x_poly(k)
    # x^(q^n) == x mod f
    h = mod(k, x, f)
    for _ in range(n):
        h = _frob_power(k, h, q, f)
    if not eq(k, h, mod(k, x, f)):
        return False
    for ell in _prime_divisors(n):
        h = mod(k, x, f)
        for _ in range(n // ell):
            h = _frob_power(k, h, q, f)
        if deg(gcd(k, sub(k, h, x), f)) != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def random_irreducible(k, degree, q, rng):
    """Random monic irreducible of the given degree over a finite field."""
    if degree < 1:
        raise ValueError("degree must be positive")
    while True:
        coeffs = [k.sample(rng) for _ in range(degree)] + [k.one()]
        f = trim(k, coeffs)
        if deg(f) == degree and is_irreducible(k, f, q):
            return f


def equal_degree_split(k, f, d, q, rng):
    """One proper monic factor of f, a squarefree product of >= 2 monic
    irreducibles all of degree d over a field with q elements."""
    n = deg(f)
    x = x_poly(k)
    while True:
        a = trim(k, [k.sample(rng) for _ in range(n)])
        if deg(a) < 1:
            continue
        g = gcd(k, a, f)
        if 0 < deg(g) < n:
            return g
        if q % 2 == 1:
            t = pow_mod(k, a, (q ** d - 1) // 2, f)
            g = gcd(k, sub(k, t, const(k, k.one())), f)
        else:
            # char 2: use the trace map sum a^(2^i) for i < s*d, q = 2^s
            s = 0
            qq = q
            while qq > 1:
                qq //= 2
                s += 1
            t = mod(k, a, f)
            acc = t
            for _ in range(s * d - 1):
                t = pow_mod(k, t, 2, f)
                acc = add(k, acc, t)
            g = gcd(k, acc, f)
        if 0 < deg(g) < n:
            return g
