"""Finite (co)chain complexes over Q with exact rank computations."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from ..errors import NilpotencyError, ValidationError
from ..linalg import SparseMatrix, rank
from ..series import as_rational

__all__ = ["ChainComplex", "cohomology_ranks"]


class ChainComplex:
    """Spaces ``dims[n]`` with differentials ``differentials[n]`` out of degree ``n``.

    ``direction='cochain'`` means ``d_n: C^n -> C^(n+1)``; ``'chain'`` means
    ``d_n: C_n -> C_(n-1)``.  A matrix has one row per target basis vector.
    Degrees listed in ``open_degrees`` are not checked for ``d^2 = 0`` (their
    outgoing map is known to leave a truncation window).
    """

    def __init__(self, dims: dict, differentials: dict | None = None, direction: str = "cochain",
                 open_degrees=(), verify: bool = True, threads: int = 1):
        if direction not in ("cochain", "chain"):
            raise ValidationError("direction must be 'cochain' or 'chain'")
        self.dims = {int(n): int(d) for n, d in dims.items()}
        if any(d < 0 for d in self.dims.values()):
            raise ValidationError("negative dimension")
        self.direction = direction
        self.step = 1 if direction == "cochain" else -1
        self.open_degrees = frozenset(open_degrees)
        self.threads = threads
        self.differentials = {}
        for n, m in (differentials or {}).items():
            n = int(n)
            if n not in self.dims or n + self.step not in self.dims:
                raise ValidationError(f"differential out of degree {n} has no source or target space")
            if (m.nrows, m.ncols) != (self.dims[n + self.step], self.dims[n]):
                raise ValidationError(
                    f"differential in degree {n} is {m.nrows}x{m.ncols}, "
                    f"expected {self.dims[n + self.step]}x{self.dims[n]}")
            self.differentials[n] = m
        self._ranks = {}
        if verify:
            self.verify_nilpotency()

    @property
    def degrees(self):
        return sorted(self.dims)

    def differential(self, n: int) -> SparseMatrix:
        m = self.differentials.get(n)
        if m is None:
            tgt = self.dims.get(n + self.step, 0)
            m = SparseMatrix.zero(tgt, self.dims.get(n, 0))
        return m

    def verify_nilpotency(self) -> list:
        """Check every composite ``d_(n+1) d_n``; returns the degrees checked."""
        checked = []
        for n in sorted(self.differentials):
            nxt = n + self.step
            if n in self.open_degrees or nxt in self.open_degrees or nxt not in self.differentials:
                continue
            comp = self.differentials[nxt] @ self.differentials[n]
            col = comp.first_nonzero_column()
            if col is not None:
                raise NilpotencyError(f"d∘d is nonzero out of degree {n}, basis vector {col}",
                                      degree=n, column=col)
            checked.append(n)
        return checked

    def rank(self, n: int) -> int:
        if n not in self._ranks:
            m = self.differentials.get(n)
            self._ranks[n] = 0 if m is None else rank(m.rows)
        return self._ranks[n]

    def _all_ranks(self):
        todo = [n for n in self.differentials if n not in self._ranks]
        if self.threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as ex:
                for n, r in zip(todo, ex.map(lambda k: rank(self.differentials[k].rows), todo)):
                    self._ranks[n] = r
        else:
            for n in todo:
                self.rank(n)

    def cohomology(self) -> dict:
        """``dim ker d_n - rank d_(n - step)`` for every degree.

        Degrees touching an open differential are left out.
        """
        self._all_ranks()
        out = {}
        for n in self.degrees:
            if n in self.open_degrees or n - self.step in self.open_degrees:
                continue
            out[n] = self.dims[n] - self.rank(n) - self.rank(n - self.step)
        return out

    def audit(self) -> dict:
        """Rank-nullity (row rank against column rank) and Euler characteristic."""
        self._all_ranks()
        for n, m in self.differentials.items():
            col_rank = rank(m.transpose().rows)
            if col_rank != self.rank(n):
                raise ValidationError(f"row rank {self.rank(n)} and column rank {col_rank} differ in degree {n}")
            kernel = self.dims[n] - col_rank
            if kernel + self.rank(n) != self.dims[n] or kernel < 0:
                raise ValidationError(f"rank-nullity fails in degree {n}")
        h = self.cohomology()
        if self.open_degrees:
            return {"euler": None, "cohomology": h}
        chi_c = sum((-1) ** n * d for n, d in self.dims.items())
        chi_h = sum((-1) ** n * d for n, d in h.items())
        if chi_c != chi_h:
            raise ValidationError(f"Euler characteristics differ: {chi_c} vs {chi_h}")
        return {"euler": chi_c, "cohomology": h}

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "dims": {str(n): d for n, d in sorted(self.dims.items())},
            "differentials": {str(n): [[str(v) for v in row] for row in m.to_dense()]
                              for n, m in sorted(self.differentials.items())},
        }

    @classmethod
    def from_json(cls, data, verify: bool = True) -> "ChainComplex":
        try:
            dims = {int(n): int(d) for n, d in data["dims"].items()}
            direction = data.get("direction", "cochain")
            diffs = {}
            for n, rows in data.get("differentials", {}).items():
                n = int(n)
                step = 1 if direction == "cochain" else -1
                ncols = dims[n]
                dense = [[as_rational(v) for v in row] for row in rows]
                if any(len(r) != ncols for r in dense):
                    raise ValidationError(f"differential {n} rows must have {ncols} entries")
                diffs[n] = SparseMatrix(len(dense), ncols,
                                        [{j: v for j, v in enumerate(r) if v} for r in dense])
                if len(dense) != dims.get(n + step, 0):
                    raise ValidationError(f"differential {n} has the wrong number of rows")
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValidationError(f"malformed complex: {exc}") from exc
        return cls(dims, diffs, direction, verify=verify)


def cohomology_ranks(c: ChainComplex) -> dict:
    return c.cohomology()
