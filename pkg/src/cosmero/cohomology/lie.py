"""Lie algebras from structure constants and their Chevalley-Eilenberg chain complexes."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from ..errors import DomainError, ValidationError
from ..linalg import SparseMatrix
from ..series import as_rational
from .complex import ChainComplex

__all__ = [
    "LieAlgebra",
    "ce_complex",
    "abelian",
    "sl2",
    "heisenberg",
]


class LieAlgebra:
    """``[e_i, e_j] = sum_k c[i][j][k] e_k`` over Q, with an optional left module.

    ``brackets`` maps ``(i, j)`` to ``{k: c}``; entries for ``(j, i)`` are
    filled in by antisymmetry and must agree if both are given.  ``module``
    is ``(m, [rho(e_0), rho(e_1), ...])`` with ``m x m`` action matrices.
    """

    def __init__(self, dim: int, brackets=None, module=None, name: str = ""):
        if dim < 0:
            raise ValidationError("dimension must be non-negative")
        self.dim = dim
        self.name = name
        c = {}
        for (i, j), vec in (brackets or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValidationError(f"bracket index ({i}, {j}) out of range")
            for k, v in vec.items():
                if not 0 <= k < dim:
                    raise ValidationError(f"bracket target {k} out of range")
                v = as_rational(v) if not isinstance(v, Fraction) else v
                if not v:
                    continue
                for key, val in (((i, j, k), v), ((j, i, k), -v)):
                    if key in c and c[key] != val:
                        raise ValidationError(f"brackets are not antisymmetric at {key[:2]}")
                    c[key] = val
        for i in range(dim):
            if any(c.get((i, i, k)) for k in range(dim)):
                raise ValidationError(f"[e_{i}, e_{i}] must vanish")
        self._c = c
        self.module = None
        if module is not None:
            m, mats = module
            if len(mats) != dim:
                raise ValidationError("one action matrix per basis element is required")
            clean = []
            for a in mats:
                if len(a) != m or any(len(r) != m for r in a):
                    raise ValidationError("action matrices must be m x m")
                clean.append([[as_rational(v) if not isinstance(v, Fraction) else v for v in r] for r in a])
            self.module = (m, clean)
        self.validate()

    def bracket(self, i: int, j: int) -> dict:
        return {k: v for (a, b, k), v in self._c.items() if a == i and b == j}

    def structure_constant(self, i, j, k) -> Fraction:
        return self._c.get((i, j, k), Fraction(0))

    def jacobi_failures(self) -> list:
        bad = []
        n = self.dim
        for i, j, k in combinations(range(n), 3):
            total = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, v in self.bracket(a, b).items():
                    for r, w in self.bracket(m, c).items():
                        total[r] = total.get(r, 0) + v * w
            if any(total.values()):
                bad.append((i, j, k))
        return bad

    def validate(self):
        bad = self.jacobi_failures()
        if bad:
            raise ValidationError(f"Jacobi identity fails on basis triple {bad[0]}")
        if self.module is not None:
            m, rho = self.module
            for i, j in combinations(range(self.dim), 2):
                lhs = [[sum((rho[k][r][s] * v for k, v in self.bracket(i, j).items()), Fraction(0))
                         for s in range(m)] for r in range(m)]
                rhs = [[sum(rho[i][r][t] * rho[j][t][s] - rho[j][r][t] * rho[i][t][s] for t in range(m))
                        for s in range(m)] for r in range(m)]
                if lhs != rhs:
                    raise ValidationError(f"module action does not respect [e_{i}, e_{j}]")

    def to_json(self) -> dict:
        br = [[i, j, k, str(v)] for (i, j, k), v in sorted(self._c.items()) if i < j]
        out = {"dim": self.dim, "brackets": br}
        if self.module is not None:
            m, rho = self.module
            out["module"] = {"dim": m, "action": [[[str(v) for v in r] for r in a] for a in rho]}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data) -> "LieAlgebra":
        try:
            dim = int(data["dim"])
            br = {}
            for i, j, k, v in data.get("brackets", []):
                br.setdefault((int(i), int(j)), {})
                key = int(k)
                br[(int(i), int(j))][key] = br[(int(i), int(j))].get(key, 0) + as_rational(v)
            module = None
            if data.get("module"):
                mod = data["module"]
                module = (int(mod["dim"]), [[[as_rational(v) for v in r] for r in a] for a in mod["action"]])
            return cls(dim, br, module, data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed Lie algebra: {exc}") from exc


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, name=f"abelian{n}")


def sl2() -> LieAlgebra:
    """Basis ``e, f, h`` with ``[e,f] = h``, ``[h,e] = 2e``, ``[h,f] = -2f``."""
    e, f, h = 0, 1, 2
    return LieAlgebra(3, {(e, f): {h: 1}, (h, e): {e: 2}, (h, f): {f: -2}}, name="sl2")


def heisenberg() -> LieAlgebra:
    """``[x, y] = z`` with ``z`` central."""
    return LieAlgebra(3, {(0, 1): {2: 1}}, name="heisenberg")


# ---------------------------------------------------------------------------
# the Chevalley-Eilenberg complex


class _PBW:
    """Right multiplication by generators on ordered PBW monomials."""

    def __init__(self, g: LieAlgebra):
        self.g = g
        self.mul_mono = lru_cache(maxsize=None)(self._mul_mono)

    def _mul_mono(self, mono: tuple, k: int) -> tuple:
        if not mono or mono[-1] <= k:
            return ((mono + (k,), Fraction(1)),)
        head, j = mono[:-1], mono[-1]
        # head e_j e_k = head e_k e_j + head [e_j, e_k]
        acc = {}
        for m, v in self.mul_mono(head, k):
            for m2, w in self.mul_mono(m, j):
                acc[m2] = acc.get(m2, 0) + v * w
        for c, v in self.g.bracket(j, k).items():
            for m2, w in self.mul_mono(head, c):
                acc[m2] = acc.get(m2, 0) + v * w
        return tuple((m, v) for m, v in sorted(acc.items()) if v)


def _wedge_insert(k: int, rest: tuple):
    """``e_k ∧ e_rest`` as ``(sign, sorted tuple)``, or None if it vanishes."""
    if k in rest:
        return None
    pos = sum(1 for r in rest if r < k)
    return (-1) ** pos, tuple(sorted(rest + (k,)))


def _monomials(n: int, max_deg: int) -> list:
    out = []
    for d in range(max_deg + 1):
        out.extend(combinations_with_replacement(range(n), d))
    return out


def ce_complex(g: LieAlgebra, pbw_cutoff: int = 0, p_max: int | None = None,
               window: str = "total", use_module: bool = True, threads: int = 1) -> ChainComplex:
    """Chain complex ``U ⊗ Λ^p g`` with the Chevalley-Eilenberg differential.

    ``pbw_cutoff = 0`` replaces ``U`` by the coefficients: the trivial module
    Q, or the algebra's module (acting on the right by ``m.x = -rho(x) m``)
    when one is attached and ``use_module`` is set.

    For ``pbw_cutoff > 0`` the ``U`` factor is truncated by PBW degree.
    ``window='total'`` keeps ``deg u + p <= cutoff``, which the differential
    preserves.  ``window='pbw'`` keeps ``deg u <= cutoff`` in every degree;
    images leaving it are dropped and the affected degrees are marked open.
    """
    n = g.dim
    if p_max is None:
        p_max = n
    if p_max < 0 or pbw_cutoff < 0:
        raise DomainError("p_max and pbw_cutoff must be non-negative")
    if window not in ("total", "pbw"):
        raise DomainError("window must be 'total' or 'pbw'")
    p_max = min(p_max, n)
    wedges = {p: list(combinations(range(n), p)) for p in range(p_max + 1)}

    if pbw_cutoff == 0:
        if use_module and g.module is not None:
            m, rho = g.module
            coeffs = {p: list(range(m)) for p in wedges}

            def right(c, k):
                # basis vector c times e_k = -rho(e_k) c
                return [(r, -rho[k][r][c]) for r in range(m) if rho[k][r][c]]
        else:
            coeffs = {p: [0] for p in wedges}

            def right(c, k):
                return []
    else:
        pbw = _PBW(g)
        if window == "total":
            coeffs = {p: _monomials(n, pbw_cutoff - p) if pbw_cutoff >= p else [] for p in wedges}
        else:
            coeffs = {p: _monomials(n, pbw_cutoff) for p in wedges}

        def right(c, k):
            return list(pbw.mul_mono(c, k))

    bases = {p: [(c, w) for w in wedges[p] for c in coeffs[p]] for p in wedges}
    index = {p: {b: i for i, b in enumerate(bases[p])} for p in bases}
    dims = {p: len(bases[p]) for p in bases}
    diffs = {}
    open_degrees = set()
    for p in range(1, p_max + 1):
        cols = {}
        for col, (c, w) in enumerate(bases[p]):
            img = {}

            def add(key, v):
                i = index[p - 1].get(key)
                if i is None:
                    open_degrees.add(p)
                    return
                img[i] = img.get(i, 0) + v

            for a in range(p):
                sign = 1 if a % 2 == 0 else -1      # (-1)^(i+1) with i = a+1
                rest = w[:a] + w[a + 1:]
                for c2, v in right(c, w[a]):
                    add((c2, rest), sign * v)
            for a in range(p):
                for b in range(a + 1, p):
                    sign = 1 if (a + b) % 2 == 0 else -1
                    rest = w[:a] + w[a + 1:b] + w[b + 1:]
                    for k, v in g.bracket(w[a], w[b]).items():
                        ins = _wedge_insert(k, rest)
                        if ins is not None:
                            s, w2 = ins
                            add((c, w2), sign * s * v)
            cols[col] = {i: v for i, v in img.items() if v}
        rows = [{} for _ in range(dims[p - 1])]
        for col, img in cols.items():
            for i, v in img.items():
                rows[i][col] = v
        diffs[p] = SparseMatrix(dims[p - 1], dims[p], rows)
    return ChainComplex(dims, diffs, "chain", open_degrees=open_degrees, threads=threads)
