"""Exact linear algebra over Q and Z.

Ranks use fraction-free elimination: every row is scaled to a primitive
integer vector and rows are combined as ``a*r - b*p`` followed by removal of
the content gcd, so no rounding and no denominator growth occurs.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .errors import ValidationError

__all__ = [
    "SparseMatrix",
    "rank",
    "bareiss_rank",
    "solve",
    "kernel",
    "smith_normal_form",
]


class SparseMatrix:
    """Row-major sparse matrix with Fraction entries."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValidationError("row count mismatch")
        clean = []
        for r in rows:
            d = {}
            for j, v in r.items():
                if not 0 <= j < ncols:
                    raise ValidationError(f"column {j} out of range")
                v = Fraction(v)
                if v:
                    d[j] = v
            clean.append(d)
        self.rows = clean

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, [{j: v for j, v in enumerate(r) if v} for r in data])

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @classmethod
    def zero(cls, nrows, ncols):
        return cls(nrows, ncols)

    def to_dense(self):
        out = []
        for r in self.rows:
            row = [Fraction(0)] * self.ncols
            for j, v in r.items():
                row[j] = v
            out.append(row)
        return out

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def is_zero(self):
        return not any(self.rows)

    def transpose(self):
        cols = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValidationError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        out = []
        orows = other.rows
        for r in self.rows:
            acc = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append({j: v for j, v in acc.items() if v})
        return SparseMatrix(self.nrows, other.ncols, out)

    def apply(self, vec):
        """Matrix times a dense vector."""
        return [sum((v * vec[j] for j, v in r.items()), Fraction(0)) for r in self.rows]

    def first_nonzero_column(self):
        """Smallest column index carrying a nonzero entry, or None."""
        cols = [min(r) for r in self.rows if r]
        return min(cols) if cols else None

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    def rank(self):
        return rank(self.rows)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _primitive(row: dict) -> dict:
    """Scale a rational row to a primitive integer row with positive leading entry."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        den = lcm(den, Fraction(v).denominator)
    ints = {j: int(Fraction(v) * den) for j, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    lead = ints[min(ints)]
    if lead < 0:
        g = -g
    return {j: v // g for j, v in ints.items()}


def rank(rows) -> int:
    """Rank over Q of a list of rows (dicts ``col -> value`` or sequences)."""
    pivots: dict[int, dict] = {}
    for r in rows:
        if not isinstance(r, dict):
            r = {j: v for j, v in enumerate(r) if v}
        r = _primitive(r)
        while r:
            j = min(r)
            p = pivots.get(j)
            if p is None:
                pivots[j] = r
                break
            a, b = p[j], r[j]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {}
            for k in set(r) | set(p):
                v = a * r.get(k, 0) - b * p.get(k, 0)
                if v:
                    new[k] = v
            r = _primitive(new)
    return len(pivots)


def bareiss_rank(matrix) -> int:
    """Dense fraction-free (Bareiss) elimination rank of an integer/rational matrix."""
    m = [list(r) for r in matrix]
    if not m or not m[0]:
        return 0
    den = 1
    for r in m:
        for v in r:
            den = lcm(den, Fraction(v).denominator)
    m = [[int(Fraction(v) * den) for v in r] for r in m]
    nr, nc = len(m), len(m[0])
    prev = 1
    rk = 0
    for col in range(nc):
        piv = next((i for i in range(rk, nr) if m[i][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(rk + 1, nr):
            for j in range(col + 1, nc):
                m[i][j] = (m[rk][col] * m[i][j] - m[i][col] * m[rk][j]) // prev
            m[i][col] = 0
        prev = m[rk][col]
        rk += 1
        if rk == nr:
            break
    return rk


def _rref(aug, ncols):
    m = [[Fraction(v) for v in r] for r in aug]
    piv_cols = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    return m, piv_cols


def solve(a, b):
    """One exact solution of ``a x = b`` (dense), or None if inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [bv] for r, bv in zip(a, b)]
    m, piv = _rref(aug, ncols)
    for row in m[len(piv):]:
        if row[-1]:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(piv):
        x[c] = m[i][-1]
    return x


def kernel(a, ncols=None):
    """Basis of the right null space of a dense matrix."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    m, piv = _rref(a, ncols) if a else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def smith_normal_form(matrix):
    """Nonzero invariant factors ``d_1 | d_2 | ...`` of an integer matrix."""
    m = [[int(v) for v in r] for r in matrix]
    if any(Fraction(v).denominator != 1 for r in matrix for v in r):
        raise ValidationError("Smith normal form needs an integer matrix")
    nr = len(m)
    nc = len(m[0]) if nr else 0
    diag = []
    t = 0
    while t < min(nr, nc):
        entries = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if m[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    m[i] = [a - q * b for a, b in zip(m[i], m[t])]
                    if m[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for row in m:
                        row[j] -= q * row[t]
                    if m[t][j]:
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if m[i][j] % m[t][t]), None)
                if bad is None:
                    break
                m[t] = [a + b for a, b in zip(m[t], m[bad[0]])]
                continue
            entries = [(abs(m[i][j]), i, j) for i in range(t, nr) for j in range(t, nc)
                       if m[i][j] and (i == t or j == t)]
            _, i, j = min(entries)
            m[t], m[i] = m[i], m[t]
            for row in m:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(m[t][t]))
        t += 1
    return diag
