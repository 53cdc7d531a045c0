"""The bigraded complex of element-valued cochains on the polynomial model.

``C^l_k`` is spanned by the multilinear maps ``A^l -> A`` of a
:class:`~cosmero.mero_model.ModelAlgebra`; the spaces carry no dependence on
``k`` beyond the bookkeeping of the map ``D^l_k: C^l_k -> C^(l+1)_(k-1)``.
The coboundary is assembled one output row at a time: left insertion of the
first argument, fusion of neighbouring arguments around ``zeta_i`` followed by
re-insertion, and right insertion of the last argument.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import product

from ..errors import DomainError, NilpotencyError, ValidationError
from ..linalg import SparseMatrix, rank
from ..mero_model import ModelAlgebra, ModelCochain, apply_coboundary, default_zetas, fusion_expand
from ..series import Poly

__all__ = ["coboundary_matrix", "apply_matrix", "DoubleComplex", "double_complex"]


def _coeffs(model: ModelAlgebra, p: Poly) -> dict:
    """``{a: c}`` for a polynomial in ``t`` alone (no free parameters)."""
    out = {}
    for e, v in p.terms():
        if any(e[1:]):
            raise DomainError("expected a polynomial in t only")
        out[e[0]] = out.get(e[0], 0) + v
    return {a: v for a, v in out.items() if v}


def _row_block(model: ModelAlgebra, l: int, args: tuple, zetas: tuple, index: dict) -> dict:
    """Rows ``(c, *args)`` of the coboundary as ``{c: {source column: value}}``."""
    dim = model.dim
    rows = {c: {} for c in range(dim)}

    def add(c, key, v):
        col = index[key]
        r = rows[c]
        r[col] = r.get(col, 0) + v

    # left insertion of the first argument
    x1 = model.basis(args[0])
    for c2 in range(dim):
        for c, v in _coeffs(model, model.left_action(x1, model.basis(c2))).items():
            add(c, (c2,) + args[1:], v)
    # fusions of neighbours, re-inserted at zeta_i
    for i in range(1, l + 1):
        zeta = zetas[i - 1]
        parts = fusion_expand(model, args[i - 1], 0, args[i], 0, zeta)
        fused = sum((c * Poly.variable(0, c.nvars) ** r for r, c in parts.items()), Poly(1))
        at_zeta = model.truncate(model.translate(fused, zeta))
        sign = 1 if i % 2 == 0 else -1
        for b, u in _coeffs(model, at_zeta).items():
            key_tail = args[:i - 1] + (b,) + args[i + 1:]
            for c in range(dim):
                add(c, (c,) + key_tail, sign * u)
    # right insertion of the last argument
    xl = model.basis(args[l])
    sign = 1 if (l + 1) % 2 == 0 else -1
    for c2 in range(dim):
        for c, v in _coeffs(model, model.right_action(model.basis(c2), xl)).items():
            add(c, (c2,) + args[:l], sign * v)
    return {c: {k: v for k, v in r.items() if v} for c, r in rows.items()}


def coboundary_matrix(model: ModelAlgebra, l: int, zetas=None, threads: int = 1) -> SparseMatrix:
    """Matrix of the coboundary from ``l``- to ``(l+1)``-cochains.

    Rows and columns follow :meth:`ModelCochain.basis_keys`.
    """
    if l < 0:
        raise DomainError("cochain degree must be non-negative")
    zetas = default_zetas(l) if zetas is None else tuple(Fraction(z) for z in zetas)
    if len(zetas) != l:
        raise ValidationError(f"need {l} fusion points, got {len(zetas)}")
    src = ModelCochain.basis_keys(model, l)
    index = {k: i for i, k in enumerate(src)}
    arg_tuples = list(product(range(model.dim), repeat=l + 1))

    def block(args):
        return args, _row_block(model, l, args, zetas, index)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            blocks = dict(ex.map(block, arg_tuples))
    else:
        blocks = dict(map(block, arg_tuples))
    tgt = ModelCochain.basis_keys(model, l + 1)
    rows = [blocks[key[1:]][key[0]] for key in tgt]
    return SparseMatrix(len(tgt), len(src), rows)


def apply_matrix(m: SparseMatrix, F: ModelCochain) -> ModelCochain:
    model = F.model
    src = ModelCochain.basis_keys(model, F.l)
    vec = [F.coeffs.get(k, Fraction(0)) for k in src]
    out = m.apply(vec)
    tgt = ModelCochain.basis_keys(model, F.l + 1)
    return ModelCochain(model, F.l + 1, {k: v for k, v in zip(tgt, out) if v})


class DoubleComplex:
    """Spaces ``C^l_k`` for ``0 <= l <= lmax + 1`` and ``0 <= k <= kmax``.

    The model is checked against its axioms before anything is assembled.
    """

    def __init__(self, model: ModelAlgebra, lmax: int, kmax: int, zetas: dict | None = None,
                 threads: int = 1):
        if lmax < 0 or kmax < 1:
            raise DomainError("need lmax >= 0 and kmax >= 1")
        failures = model.validate()
        if failures:
            raise ValidationError(f"model fails its axiom checks: {failures[0]}")
        self.model = model
        self.lmax = lmax
        self.kmax = kmax
        self.threads = threads
        self.zetas = zetas or {}
        self._mats = {}
        self._ranks = {}

    def dim(self, l: int) -> int:
        return self.model.dim ** (l + 1)

    def matrix(self, l: int) -> SparseMatrix:
        """``D^l_k`` (the same matrix for every admissible ``k``)."""
        if l not in self._mats:
            self._mats[l] = coboundary_matrix(self.model, l, self.zetas.get(l), self.threads)
        return self._mats[l]

    def cells(self) -> list:
        """Bidegrees ``(l, k)`` where ``D^(l+1)_(k-1) D^l_k`` lands in a valid cell."""
        return [[l, k] for l in range(self.lmax + 1) for k in range(2, self.kmax + 1)]

    def d2check(self) -> dict:
        checked = []
        for l, k in self.cells():
            comp = self.matrix(l + 1) @ self.matrix(l)
            col = comp.first_nonzero_column()
            if col is not None:
                raise NilpotencyError(f"D∘D is nonzero from cell ({l}, {k}), basis vector {col}",
                                      degree=(l, k), column=col)
            checked.append([l, k])
        return {"nilpotent": True, "checked_cells": checked,
                "dims": {str(l): self.dim(l) for l in range(self.lmax + 3)}}

    def rank(self, l: int) -> int:
        if l < 0:
            return 0
        if l not in self._ranks:
            self._ranks[l] = rank(self.matrix(l).rows)
        return self._ranks[l]

    def cohomology(self) -> dict:
        """``dim ker D^l_k - rank D^(l-1)_(k+1)`` for ``l <= lmax`` and ``k < kmax``."""
        out = {}
        for l in range(self.lmax + 1):
            h = self.dim(l) - self.rank(l) - self.rank(l - 1)
            for k in range(self.kmax):
                out[(l, k)] = h
        return out

    def zeta_independent(self, l: int, zetas) -> bool:
        """Whether a second choice of fusion points gives the same matrix."""
        return coboundary_matrix(self.model, l, zetas) == self.matrix(l)

    def image_closure_failures(self, F: ModelCochain, trials: int = 3, seed: int = 0) -> list:
        """Compare the matrix image with the literal coboundary at random points."""
        rng = random.Random(seed)
        image = apply_matrix(self.matrix(F.l), F)
        bad = []
        for _ in range(trials):
            args = tuple(rng.randrange(self.model.dim) for _ in range(F.l + 1))
            zs = [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(F.l + 1)]
            xs = [(self.model.basis(a), z) for a, z in zip(args, zs)]
            if apply_coboundary(F, xs, self.zetas.get(F.l)) != image.evaluate(xs):
                bad.append({"args": list(args), "z": [str(z) for z in zs]})
        return bad


def double_complex(model: ModelAlgebra, lmax: int, kmax: int, threads: int = 1) -> DoubleComplex:
    return DoubleComplex(model, lmax, kmax, threads=threads)
