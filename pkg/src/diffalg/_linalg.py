"""Exact Gaussian elimination over a field object.

Matrices are lists of row lists of field elements.  Everything here is
fraction-free only in the sense of being exact; pivots are divided out, so
the field must supply inv().
"""

from __future__ import annotations


def zeros(k, rows, cols):
    return [[k.zero() for _ in range(cols)] for _ in range(rows)]


def identity(k, n):
    m = zeros(k, n, n)
    for i in range(n):
        m[i][i] = k.one()
    return m


def copy(m):
    return [list(r) for r in m]


def mat_vec(k, m, v):
    return [_dot(k, row, v) for row in m]


def _dot(k, row, v):
    acc = k.zero()
    for a, b in zip(row, v):
        if not k.is_zero(a) and not k.is_zero(b):
            acc = k.add(acc, k.mul(a, b))
    return acc


def mat_mul(k, a, b):
    cols = list(zip(*b)) if b else []
    return [[_dot(k, row, col) for col in cols] for row in a]


def transpose(m):
    return [list(c) for c in zip(*m)] if m else []


def rref(k, m):
    """Reduced row echelon form; returns (rref_rows, pivot_columns)."""
    m = copy(m)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if not k.is_zero(m[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = k.inv(m[r][c])
        m[r] = [k.mul(inv, a) for a in m[r]]
        for i in range(rows):
            if i != r and not k.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [k.sub(a, k.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def rank(k, m):
    return len(rref(k, m)[0])


def nullspace(k, m):
    """Basis of the right kernel as a list of vectors."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    red, pivots = rref(k, m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [k.zero()] * cols
        v[f] = k.one()
        for r, p in enumerate(pivots):
            v[p] = k.neg(red[r][f])
        basis.append(v)
    return basis


def det(k, m):
    n = len(m)
    m = copy(m)
    acc = k.one()
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if not k.is_zero(m[i][c]):
                pivot = i
                break
        if pivot is None:
            return k.zero()
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            acc = k.neg(acc)
        acc = k.mul(acc, m[c][c])
        inv = k.inv(m[c][c])
        for i in range(c + 1, n):
            if k.is_zero(m[i][c]):
                continue
            f = k.mul(m[i][c], inv)
            m[i] = [k.sub(a, k.mul(f, b)) for a, b in zip(m[i], m[c])]
    return acc


def solve(k, m, b):
    """One solution x of m x = b, or None if inconsistent."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    aug = [list(r) + [b[i]] for i, r in enumerate(m)]
    red, pivots = rref(k, aug)
    for row in red:
        if all(k.is_zero(a) for a in row[:cols]) and not k.is_zero(row[cols]):
            return None
    x = [k.zero()] * cols
    for r, p in enumerate(pivots):
        if p == cols:
            return None
        x[p] = red[r][cols]
    return x


def inverse(k, m):
    n = len(m)
    aug = [list(r) + row for r, row in zip(m, identity(k, n))]
    red, pivots = rref(k, aug)
    if pivots[:n] != list(range(n)):
        raise ArithmeticError("matrix is singular")
    return [row[n:] for row in red]


class SpanBasis:
    """Incrementally maintained echelon basis of a subspace of k^n."""

    def __init__(self, k, n):
        self.k = k
        self.n = n
        self.rows = []          # echelon rows, pivot in strictly increasing column
        self.pivots = []

    def reduce(self, v):
        """Reduce v against the current rows; returns the remainder."""
        k = self.k
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not k.is_zero(c):
                v = [k.sub(a, k.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, v):
        return all(self.k.is_zero(a) for a in self.reduce(v))

    def add(self, v):
        """Insert v; returns True if the span grew."""
        k = self.k
        r = self.reduce(v)
        for p in range(self.n):
            if not k.is_zero(r[p]):
                inv = k.inv(r[p])
                r = [k.mul(inv, a) for a in r]
                idx = 0
                while idx < len(self.pivots) and self.pivots[idx] < p:
                    idx += 1
                self.rows.insert(idx, r)
                self.pivots.insert(idx, p)
                self._back_reduce(idx)
                return True
        return False

    def _back_reduce(self, idx):
        k = self.k
        p = self.pivots[idx]
        new_row = self.rows[idx]
        for j in range(len(self.rows)):
            if j == idx:
                continue
            c = self.rows[j][p]
            if not k.is_zero(c):
                self.rows[j] = [k.sub(a, k.mul(c, b)) for a, b in zip(self.rows[j], new_row)]

    def dim(self):
        return len(self.rows)

    def coordinates(self, v):
        """Coordinates of v in the echelon basis, or None if outside."""
        k = self.k
        v = list(v)
        coords = []
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            coords.append(c)
            if not k.is_zero(c):
                v = [k.sub(a, k.mul(c, b)) for a, b in zip(v, row)]
        if any(not k.is_zero(a) for a in v):
            return None
        return coords

    def basis(self):
        return [list(r) for r in self.rows]

    def equals(self, other):
        if self.dim() != other.dim():
            return False
        k = self.k
        for r1, r2 in zip(self.rows, other.rows):
            if any(not k.eq(a, b) for a, b in zip(r1, r2)):
                return False
        return True
