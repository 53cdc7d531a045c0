"""Čech-type complexes of a covering nerve with coefficients on its simplices.

Two conventions are available.

``"chains"``: cochains of degree ``k`` live on strict chains of simplices
``J_0 ⊋ J_1 ⊋ ... ⊋ J_k`` (chains of inclusions ``U_J0 -> ... -> U_Jk`` of
intersections) with values in ``F(J_0)``.  The faces are: restrict from
``J_1`` for ``i = 0``, drop ``J_i`` (compose the two inclusions) for the
middle faces, and drop the last element for ``i = k+1``.

``"simplicial"``: the ordinary simplicial complex, degree ``k`` on the
``k``-simplices, ``(dc)(s) = sum_j (-1)^j res c(s minus its j-th vertex)``.

Both compute the same cohomology when the restrictions are functorial.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..errors import UnsupportedOperation, ValidationError
from ..linalg import SparseMatrix
from ..series import as_rational
from .complex import ChainComplex

__all__ = ["Nerve", "CoefficientSystem", "CechComplex", "cech_complex", "FIXTURE_NERVES"]


class Nerve:
    """Downward-closed family of nonempty finite index sets, built from facets."""

    def __init__(self, facets):
        simp = set()
        for f in facets:
            f = tuple(sorted(set(int(v) for v in f)))
            if not f:
                raise ValidationError("empty facet")
            for r in range(1, len(f) + 1):
                simp.update(combinations(f, r))
        if not simp:
            raise ValidationError("a nerve needs at least one nonempty set")
        self._simplices = simp
        self.facets = sorted(s for s in simp if not any(set(s) < set(t) for t in simp))
        self.vertices = sorted({v for s in simp for v in s})

    def __contains__(self, s):
        return tuple(sorted(s)) in self._simplices

    @property
    def dimension(self) -> int:
        return max(len(s) for s in self._simplices) - 1

    def simplices(self, k: int | None = None) -> list:
        if k is None:
            return sorted(self._simplices, key=lambda s: (len(s), s))
        return sorted(s for s in self._simplices if len(s) == k + 1)

    def faces(self, s: tuple) -> list:
        """Codimension-one faces of ``s`` (none for a vertex)."""
        if len(s) == 1:
            return []
        return [s[:j] + s[j + 1:] for j in range(len(s))]

    def to_json(self):
        return {"facets": [list(f) for f in self.facets]}

    @classmethod
    def from_json(cls, data) -> "Nerve":
        try:
            return cls(data["facets"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed nerve: {exc}") from exc


FIXTURE_NERVES = {
    "circle": [[0, 1], [1, 2], [0, 2]],
    "simplex2": [[0, 1, 2]],
    "sphere2": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
    "two_points": [[0], [1]],
    "two_triangles": [[0, 1, 2], [1, 2, 3]],
}


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]) if b else 0)]
            for i in range(len(a))]


def _apply(m, v):
    return [sum((m[i][j] * v[j] for j in range(len(v))), Fraction(0)) for i in range(len(m))]


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


class CoefficientSystem:
    """A vector space ``F(s)`` per simplex and maps ``F(t) -> F(s)`` for ``t ⊂ s``.

    ``restrictions`` maps ``(t, s)`` to a ``dim F(s) x dim F(t)`` matrix.
    Maps for codimension-one pairs are required; longer ones are composed
    along a path and, when supplied explicitly, checked against the composite.
    ``algebra`` optionally maps each simplex to ``(mult, unit)`` with
    ``mult[i][j]`` the product of basis vectors ``i, j`` as a vector.
    """

    def __init__(self, nerve: Nerve, dims: dict, restrictions: dict, algebra: dict | None = None):
        self.nerve = nerve
        self.dims = {}
        for s in nerve.simplices():
            d = dims.get(s)
            if d is None:
                raise ValidationError(f"no coefficient space for simplex {list(s)}")
            self.dims[s] = int(d)
        self._maps = {}
        for (t, s), m in restrictions.items():
            t, s = tuple(sorted(t)), tuple(sorted(s))
            if not (set(t) < set(s)) or t not in nerve or s not in nerve:
                raise ValidationError(f"restriction {list(t)} -> {list(s)} is not a proper face inclusion")
            m = [[as_rational(v) if not isinstance(v, Fraction) else v for v in row] for row in m]
            if len(m) != self.dims[s] or any(len(r) != self.dims[t] for r in m):
                raise ValidationError(f"restriction {list(t)} -> {list(s)} has the wrong shape")
            self._maps[(t, s)] = m
        self.algebra = None
        if algebra is not None:
            self.algebra = {}
            for s in nerve.simplices():
                if s not in algebra:
                    raise ValidationError(f"no algebra structure on simplex {list(s)}")
                mult, unit = algebra[s]
                d = self.dims[s]
                mult = [[[as_rational(x) for x in mult[i][j]] for j in range(d)] for i in range(d)]
                unit = [as_rational(x) for x in unit]
                self.algebra[s] = (mult, unit)
        self._cache = {}
        self.validate()

    @classmethod
    def constant(cls, nerve: Nerve, dim: int = 1, algebra: bool = True) -> "CoefficientSystem":
        dims = {s: dim for s in nerve.simplices()}
        maps = {(f, s): _identity(dim) for s in nerve.simplices() for f in nerve.faces(s)}
        alg = None
        if algebra and dim == 1:
            alg = {s: ([[[1]]], [1]) for s in nerve.simplices()}
        return cls(nerve, dims, maps, alg)

    def map(self, t: tuple, s: tuple):
        """The restriction ``F(t) -> F(s)`` for ``t ⊆ s``."""
        if t == s:
            return _identity(self.dims[s])
        key = (t, s)
        if key in self._cache:
            return self._cache[key]
        if len(s) - len(t) == 1:
            if key not in self._maps:
                raise ValidationError(f"missing restriction {list(t)} -> {list(s)}")
            m = self._maps[key]
        else:
            # go up one vertex at a time through the smallest intermediate face
            extra = min(set(s) - set(t))
            mid = tuple(sorted(t + (extra,)))
            m = _matmul(self.map(mid, s), self.map(t, mid))
        self._cache[key] = m
        return m

    def validate(self):
        for s in self.nerve.simplices():
            for f in self.nerve.faces(s):
                if (f, s) not in self._maps:
                    raise ValidationError(f"missing restriction {list(f)} -> {list(s)}")
        for s in self.nerve.simplices():
            if len(s) < 3:
                continue
            for t in combinations(s, len(s) - 2):
                mids = [tuple(sorted(t + (v,))) for v in s if v not in t]
                paths = [_matmul(self._maps[(m, s)], self._maps[(t, m)]) for m in mids]
                if paths[0] != paths[1]:
                    raise ValidationError(
                        f"restrictions are not functorial on the triangle {list(t)} -> "
                        f"{list(mids[0])}, {list(mids[1])} -> {list(s)}")
        for (t, s), m in self._maps.items():
            if len(s) - len(t) > 1 and m != self.map_composite(t, s):
                raise ValidationError(f"restriction {list(t)} -> {list(s)} differs from the composite")
        if self.algebra is not None:
            for (t, s), m in self._maps.items():
                mt, ut = self.algebra[t]
                ms, us = self.algebra[s]
                if _apply(m, ut) != us:
                    raise ValidationError(f"restriction {list(t)} -> {list(s)} does not preserve the unit")
                dt = self.dims[t]
                for i in range(dt):
                    for j in range(dt):
                        lhs = _apply(m, mt[i][j])
                        ci = [row[i] for row in m]
                        cj = [row[j] for row in m]
                        if lhs != self.multiply(s, ci, cj):
                            raise ValidationError(
                                f"restriction {list(t)} -> {list(s)} is not multiplicative")

    def map_composite(self, t, s):
        extra = min(set(s) - set(t))
        mid = tuple(sorted(t + (extra,)))
        return _matmul(self.map(mid, s), self.map(t, mid))

    def multiply(self, s: tuple, a, b):
        if self.algebra is None:
            raise UnsupportedOperation("coefficients carry no algebra structure")
        mult, _ = self.algebra[s]
        d = self.dims[s]
        out = [Fraction(0)] * d
        for i in range(d):
            if not a[i]:
                continue
            for j in range(d):
                if b[j]:
                    for r, v in enumerate(mult[i][j]):
                        out[r] += a[i] * b[j] * v
        return out

    def unit(self, s: tuple):
        if self.algebra is None:
            raise UnsupportedOperation("coefficients carry no algebra structure")
        return list(self.algebra[s][1])

    @classmethod
    def from_json(cls, nerve: Nerve, data) -> "CoefficientSystem":
        """``{"dims": [[simplex, d], ...], "restrictions": [[t, s, matrix], ...], "algebra": ...}``."""
        try:
            dims = {tuple(sorted(s)): int(d) for s, d in data["dims"]}
            maps = {(tuple(sorted(t)), tuple(sorted(s))): m for t, s, m in data["restrictions"]}
            alg = None
            if data.get("algebra"):
                alg = {tuple(sorted(s)): (mult, unit) for s, mult, unit in data["algebra"]}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed coefficient system: {exc}") from exc
        return cls(nerve, dims, maps, alg)


def _strict_chains(nerve: Nerve) -> dict:
    """Chains ``J_0 ⊋ ... ⊋ J_k`` grouped by ``k``."""
    simp = nerve.simplices()
    below = {s: [t for t in simp if set(t) < set(s)] for s in simp}
    out = {}
    stack = [(s,) for s in simp]
    while stack:
        ch = stack.pop()
        out.setdefault(len(ch) - 1, []).append(ch)
        for t in below[ch[-1]]:
            stack.append(ch + (t,))
    return {k: sorted(v, key=lambda c: [(len(s), s) for s in c]) for k, v in out.items()}


class CechComplex:
    """The complex together with its basis ``(cell, component)`` per degree."""

    def __init__(self, coeffs: CoefficientSystem, convention: str = "chains", threads: int = 1):
        if convention not in ("chains", "simplicial"):
            raise ValidationError("convention must be 'chains' or 'simplicial'")
        self.coeffs = coeffs
        self.convention = convention
        nerve = coeffs.nerve
        if convention == "chains":
            self.cells = _strict_chains(nerve)
        else:
            self.cells = {k: [(s,) for s in nerve.simplices(k)] for k in range(nerve.dimension + 1)}
        self.basis = {k: [(c, i) for c in cells for i in range(coeffs.dims[self._support(c)])]
                      for k, cells in self.cells.items()}
        self.index = {k: {b: n for n, b in enumerate(bs)} for k, bs in self.basis.items()}
        dims = {k: len(b) for k, b in self.basis.items()}
        diffs = {}
        for k in sorted(self.cells):
            if k + 1 in self.cells:
                diffs[k] = self._delta_matrix(k)
        self.complex = ChainComplex(dims, diffs, "cochain", threads=threads)

    def _support(self, cell):
        # the simplex whose coefficient space holds the value
        return cell[0]

    def _faces(self, cell):
        """``(sign, face cell, restriction matrix or None)`` for each face."""
        out = []
        if self.convention == "chains":
            k = len(cell) - 1
            for i in range(k + 1):
                sign = 1 if i % 2 == 0 else -1
                if i == 0:
                    out.append((sign, cell[1:], self.coeffs.map(cell[1], cell[0])))
                else:
                    out.append((sign, cell[:i] + cell[i + 1:], None))
        else:
            s = cell[0]
            for j in range(len(s)):
                f = s[:j] + s[j + 1:]
                sign = 1 if j % 2 == 0 else -1
                out.append((sign, (f,), self.coeffs.map(f, s)))
        return out

    def _delta_matrix(self, k: int) -> SparseMatrix:
        rows = []
        src = self.index[k]
        for cell in self.cells[k + 1]:
            d = self.coeffs.dims[self._support(cell)]
            faces = self._faces(cell)
            for i in range(d):
                row = {}
                for sign, face, m in faces:
                    dface = self.coeffs.dims[self._support(face)]
                    for j in range(dface):
                        v = (Fraction(int(i == j)) if m is None else m[i][j])
                        if v:
                            col = src[(face, j)]
                            row[col] = row.get(col, 0) + sign * v
                rows.append({c: v for c, v in row.items() if v})
        return SparseMatrix(len(rows), len(self.basis[k]), rows)

    # cochains as dicts cell -> vector

    def to_vector(self, k: int, cochain: dict) -> list:
        vec = [Fraction(0)] * len(self.basis[k])
        for cell, val in cochain.items():
            for i, v in enumerate(val):
                vec[self.index[k][(cell, i)]] = Fraction(v)
        return vec

    def from_vector(self, k: int, vec) -> dict:
        out = {}
        for (cell, i), v in zip(self.basis[k], vec):
            out.setdefault(cell, [Fraction(0)] * self.coeffs.dims[self._support(cell)])[i] = Fraction(v)
        return out

    def delta(self, k: int, cochain: dict) -> dict:
        if k + 1 not in self.cells:
            return {}
        m = self.complex.differential(k)
        return self.from_vector(k + 1, m.apply(self.to_vector(k, cochain)))

    def unit_cochain(self) -> dict:
        return {c: self.coeffs.unit(self._support(c)) for c in self.cells[0]}

    def cup(self, a: dict, k: int, b: dict, kk: int, signed: bool = True) -> dict:
        """Graded product of a ``k``- and a ``kk``-cochain.

        With ``signed`` the result carries ``(-1)^(k kk)``.  The second factor
        is evaluated on the back part of the cell and restricted to the front
        simplex.
        """
        if self.coeffs.algebra is None:
            raise UnsupportedOperation("cup product needs coefficients with an algebra structure")
        n = k + kk
        if n not in self.cells:
            return {}
        sign = -1 if signed and (k * kk) % 2 else 1
        out = {}
        zero = lambda s: [Fraction(0)] * self.coeffs.dims[s]  # noqa: E731
        for cell in self.cells[n]:
            if self.convention == "chains":
                front, back = cell[:k + 1], cell[k:]
                target = cell[0]
                av = a.get(front) or zero(front[0])
                bv = b.get(back) or zero(back[0])
                bv = _apply(self.coeffs.map(back[0], target), bv)
            else:
                s = cell[0]
                front, back = (s[:k + 1],), (s[k:],)
                target = s
                av = _apply(self.coeffs.map(front[0], s), a.get(front) or zero(front[0]))
                bv = _apply(self.coeffs.map(back[0], s), b.get(back) or zero(back[0]))
            prod = self.coeffs.multiply(target, av, bv)
            out[cell] = [sign * v for v in prod]
        return out

    def cohomology(self) -> dict:
        return self.complex.cohomology()


def cech_complex(nerve: Nerve, coeffs: CoefficientSystem | None = None,
                 convention: str = "chains", threads: int = 1) -> CechComplex:
    if coeffs is None:
        coeffs = CoefficientSystem.constant(nerve)
    if coeffs.nerve is not nerve and coeffs.nerve.simplices() != nerve.simplices():
        raise ValidationError("coefficient system belongs to a different nerve")
    return CechComplex(coeffs, convention, threads)
