"""Chequered necklaces and their weights over the A-matrix.

    A(k, l) = eps^((k+l)/2) / sqrt(k l) * C(k, l, tau)

Exact weights are :class:`WeightPoly` values: polynomials in formal symbols
``E_k(tau_a)`` and ``sqrt(eps_a)`` whose coefficients are ``r * sqrt(b)`` with
``r`` rational and ``b`` a squarefree positive integer.  Each edge label
``a`` in {1, 2} has its own (tau, eps) pair; giving both labels the same
symbols recovers the single-parameter weight.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .elliptic import c_prefactor
from .errors import ConsistencyError, DomainError, TruncationError, UnsupportedOperation, ValidationError
from .quasimodular import eisenstein_eval, eisenstein_q
from .series import QSeries, as_rational

__all__ = [
    "Necklace",
    "EdgeParams",
    "WeightPoly",
    "AMatrix",
    "amatrix",
    "amatrices",
    "necklace_weight",
    "enumerate_necklaces",
    "NecklaceSum",
    "necklace_sum",
    "squarefree_split",
]


def squarefree_split(n: int) -> tuple:
    """``n = s^2 * b`` with ``b`` squarefree; returns ``(s, b)``."""
    if n < 1:
        raise DomainError("squarefree_split needs a positive integer")
    s, b = 1, 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            s *= d
        if n % d == 0:
            n //= d
            b *= d
        d += 1
    return s, b * n


@dataclass(frozen=True)
class Necklace:
    """Path graph with positive node labels and edge labels alternating 1, 2.

    The empty necklace has no nodes; otherwise at least two are required.
    """

    node_labels: tuple
    first_edge: int = 1

    def __post_init__(self):
        labels = tuple(int(k) for k in self.node_labels)
        object.__setattr__(self, "node_labels", labels)
        if len(labels) == 1:
            raise ValidationError("a necklace has no nodes or at least two")
        if any(k < 1 for k in labels):
            raise ValidationError("node labels must be positive")
        if self.first_edge not in (1, 2):
            raise ValidationError("edge labels are 1 or 2")

    @classmethod
    def empty(cls):
        return cls(())

    @property
    def m(self) -> int:
        return len(self.node_labels)

    @property
    def edge_labels(self) -> tuple:
        a = self.first_edge
        return tuple(a if i % 2 == 0 else 3 - a for i in range(max(self.m - 1, 0)))

    def edges(self):
        """``(k, l, a)`` for each edge from left to right."""
        n = self.node_labels
        return [(n[i], n[i + 1], a) for i, a in enumerate(self.edge_labels)]

    def reverse(self) -> "Necklace":
        if self.m == 0:
            return self
        return Necklace(self.node_labels[::-1], self.edge_labels[-1])


@dataclass(frozen=True)
class EdgeParams:
    """Parameters attached to one edge label.

    Strings are formal symbols (exact mode); numbers select numeric mode.
    """

    tau: object = "tau"
    eps: object = "eps"

    @property
    def numeric(self) -> bool:
        return not isinstance(self.tau, str)


# ---------------------------------------------------------------------------
# exact weights


def _mono_mul(m1, m2):
    d = dict(m1)
    for s, e in m2:
        d[s] = d.get(s, 0) + e
    return tuple(sorted((s, e) for s, e in d.items() if e))


class WeightPoly:
    """Polynomial in formal symbols with coefficients in Q(sqrt of integers).

    Keys are ``(monomial, radicand)`` where a monomial is a sorted tuple of
    ``(symbol, exponent)``; symbols are ``("E", k, tau_label)`` and
    ``("sqrt_eps", eps_label)``.  The ``sqrt_eps`` exponent is twice the
    power of ``eps``.
    """

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        t = {}
        for (mono, b), v in (terms or {}).items():
            v = as_rational(v)
            if not v:
                continue
            s, b = squarefree_split(b)
            key = (tuple(sorted(mono)), b)
            t[key] = t.get(key, 0) + v * s
        self._t = {k: v for k, v in t.items() if v}

    @classmethod
    def one(cls):
        return cls({((), 1): 1})

    @classmethod
    def zero(cls):
        return cls()

    def is_zero(self):
        return not self._t

    def terms(self):
        return sorted(self._t.items(), key=lambda kv: repr(kv[0]))

    def __add__(self, other):
        if not isinstance(other, WeightPoly):
            return NotImplemented
        t = dict(self._t)
        for k, v in other._t.items():
            t[k] = t.get(k, 0) + v
        return WeightPoly._raw({k: v for k, v in t.items() if v})

    def __neg__(self):
        return WeightPoly._raw({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return WeightPoly({k: v * other for k, v in self._t.items()})
        if not isinstance(other, WeightPoly):
            return NotImplemented
        t = {}
        for (m1, b1), v1 in self._t.items():
            for (m2, b2), v2 in other._t.items():
                g = math.gcd(b1, b2)
                key = (_mono_mul(m1, m2), (b1 // g) * (b2 // g))
                t[key] = t.get(key, 0) + v1 * v2 * g
        return WeightPoly._raw({k: v for k, v in t.items() if v})

    __rmul__ = __mul__

    @classmethod
    def _raw(cls, t):
        w = object.__new__(cls)
        w._t = t
        return w

    def __eq__(self, other):
        if not isinstance(other, WeightPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def eps_exponents(self) -> set:
        """Set of ``{eps_label: doubled exponent}`` patterns, one per term."""
        out = set()
        for (mono, _), _v in self._t.items():
            out.add(tuple((s[1], e) for s, e in mono if s[0] == "sqrt_eps"))
        return out

    def evaluate(self, values: dict) -> complex:
        """Numeric value; ``values`` maps tau labels and eps labels to numbers.

        Half powers of eps use the principal branch.
        """
        total = 0j
        for (mono, b), v in self._t.items():
            term = complex(v) * math.sqrt(b)
            for s, e in mono:
                if s[0] == "E":
                    term *= complex(eisenstein_eval(s[1], values[s[2]])) ** e
                else:
                    term *= complex(values[s[1]]) ** (e / 2) if e % 2 else complex(values[s[1]]) ** (e // 2)
            total += term
        return total

    def to_series(self, order: int) -> dict:
        """Substitute q-expansions (single tau symbol only).

        Returns ``{(doubled eps exponents, radicand): QSeries}``.
        """
        taus = {s[2] for (mono, _), _v in self._t.items() for s, _e in mono if s[0] == "E"}
        if len(taus) > 1:
            raise UnsupportedOperation("q-series substitution needs a single tau symbol")
        out = {}
        for (mono, b), v in self._t.items():
            s = QSeries.constant(v, order)
            eps = []
            for sym, e in mono:
                if sym[0] == "E":
                    for _ in range(e):
                        s = s * eisenstein_q(sym[1], order)
                else:
                    eps.append((sym[1], e))
            key = (tuple(eps), b)
            out[key] = out[key] + s if key in out else s
        return out

    def to_json(self):
        out = []
        for (mono, b), v in self.terms():
            out.append({
                "coefficient": str(v),
                "sqrt": b,
                "monomial": [[list(s), e] for s, e in mono],
            })
        return out

    def __repr__(self):
        if not self._t:
            return "0"
        parts = []
        for (mono, b), v in self.terms():
            root = f"*sqrt({b})" if b != 1 else ""
            sym = "".join(
                f"*E{s[1]}({s[2]})" + (f"^{e}" if e > 1 else "") if s[0] == "E"
                else f"*{s[1]}^({e}/2)" for s, e in mono)
            parts.append(f"{v}{root}{sym}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# A-matrices


@dataclass
class AMatrix:
    size: int
    params: EdgeParams
    entries: list = field(repr=False)

    @property
    def numeric(self):
        return self.params.numeric

    def entry(self, k: int, l: int):
        if not (1 <= k <= self.size and 1 <= l <= self.size):
            raise TruncationError(f"label ({k}, {l}) outside the {self.size}x{self.size} truncation")
        return self.entries[k - 1][l - 1]

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))


def _exact_entry(k, l, p: EdgeParams) -> WeightPoly:
    if (k + l) % 2:
        return WeightPoly.zero()
    # 1/sqrt(kl) = sqrt(kl)/(kl)
    coeff = c_prefactor(k, l) / (k * l)
    mono = ((("E", k + l, p.tau), 1), (("sqrt_eps", p.eps), k + l))
    return WeightPoly({(mono, k * l): coeff})


def _numeric_entry(k, l, p: EdgeParams, order: int) -> complex:
    if (k + l) % 2:
        return 0j
    e = complex(eisenstein_eval(k + l, p.tau, order))
    return complex(p.eps) ** ((k + l) // 2) / math.sqrt(k * l) * float(c_prefactor(k, l)) * e


def amatrix(size: int, params: EdgeParams | None = None, order: int = 40) -> AMatrix:
    """Truncated ``size x size`` A-matrix (1-based labels)."""
    if size < 1:
        raise DomainError("matrix size must be >= 1")
    p = params or EdgeParams()
    if p.numeric:
        if complex(p.tau).imag <= 0:
            raise DomainError("tau must lie in the upper half plane")
        rows = [[_numeric_entry(k, l, p, order) for l in range(1, size + 1)]
                for k in range(1, size + 1)]
    else:
        if not isinstance(p.eps, str):
            raise ValidationError("exact mode needs a formal eps symbol")
        rows = [[_exact_entry(k, l, p) for l in range(1, size + 1)] for k in range(1, size + 1)]
    return AMatrix(size, p, rows)


def amatrices(size: int, params=None, order: int = 40) -> dict:
    """One A-matrix per edge label.

    ``params`` is an :class:`EdgeParams` shared by both labels or a dict
    ``{1: EdgeParams, 2: EdgeParams}``.
    """
    if params is None or isinstance(params, EdgeParams):
        m = amatrix(size, params, order)
        return {1: m, 2: m}
    if set(params) != {1, 2}:
        raise ValidationError("edge parameters are needed for labels 1 and 2")
    return {a: amatrix(size, params[a], order) for a in (1, 2)}


def _unit(numeric):
    return 1 + 0j if numeric else WeightPoly.one()


def _zero(numeric):
    return 0j if numeric else WeightPoly.zero()


def necklace_weight(n: Necklace, matrices: dict):
    """Product of A-entries over the edges; the empty necklace weighs 1."""
    numeric = matrices[1].numeric
    w = _unit(numeric)
    for k, l, a in n.edges():
        w = w * matrices[a].entry(k, l)
    return w


def enumerate_necklaces(m: int, cutoff: int, first_edge: int = 1):
    """Every labelling of the ``m``-node path by ``1..cutoff``, in lexicographic order."""
    if m < 2 or cutoff < 1:
        raise DomainError("need m >= 2 and cutoff >= 1")
    for labels in product(range(1, cutoff + 1), repeat=m):
        yield Necklace(labels, first_edge)


@dataclass(frozen=True)
class NecklaceSum:
    direct: object
    transfer: object
    necklaces: int


def _matmul(a, b, zero):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                x, y = a[i][k], b[k][j]
                if _nonzero(x) and _nonzero(y):
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def _nonzero(x):
    return not x.is_zero() if isinstance(x, WeightPoly) else x != 0


def _close(a: complex, b: complex, scale: float, rel=1e-12):
    return a == b or abs(a - b) <= rel * max(abs(a), abs(b), scale)


def necklace_sum(m: int, ends: tuple, cutoff: int, matrices: dict,
                 first_edge: int = 1, threads: int = 1) -> NecklaceSum:
    """Sum of weights over all interior labellings ``<= cutoff``.

    Computed by direct enumeration and as entry ``(k, l)`` of the product
    ``A_{a_1} A_{a_2} ...`` of truncated matrices; a disagreement raises
    :class:`ConsistencyError`.  Exact results must match exactly; numeric ones
    to 1e-12 relative to the sum of absolute term values.
    """
    k, l = ends
    if m < 2:
        raise DomainError("necklace sums need m >= 2")
    if not (1 <= k <= cutoff and 1 <= l <= cutoff):
        raise DomainError("end labels must lie in 1..cutoff")
    for a in (1, 2):
        if matrices[a].size < cutoff:
            raise TruncationError("label cutoff exceeds the matrix truncation")
    numeric = matrices[1].numeric
    zero = _zero(numeric)

    def part(first):
        acc = zero
        rest = product(range(1, cutoff + 1), repeat=max(m - 3, 0))
        heads = [()] if m == 2 else [(first,)]
        for h in heads:
            for tail in (rest if m > 2 else [()]):
                acc = acc + necklace_weight(Necklace((k,) + h + tail + (l,), first_edge), matrices)
        return acc

    firsts = [None] if m == 2 else list(range(1, cutoff + 1))
    if threads > 1 and len(firsts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(part, firsts))
    else:
        parts = [part(f) for f in firsts]
    direct = zero
    for p in parts:
        direct = direct + p

    labels = Necklace((1,) * m, first_edge).edge_labels
    trunc = {a: [row[:cutoff] for row in matrices[a].entries[:cutoff]] for a in (1, 2)}
    prod = trunc[labels[0]]
    for a in labels[1:]:
        prod = _matmul(prod, trunc[a], zero)
    transfer = prod[k - 1][l - 1]

    if numeric:
        # cancellation can make the sum tiny; measure against the sum of |terms|
        mag = [[abs(x) for x in row] for row in trunc[labels[0]]]
        for a in labels[1:]:
            mag = _matmul(mag, [[abs(x) for x in row] for row in trunc[a]], 0.0)
        agree = _close(direct, transfer, mag[k - 1][l - 1])
    else:
        agree = direct == transfer
    if not agree:
        raise ConsistencyError(f"necklace sum paths disagree for m={m}, ends={ends}, cutoff={cutoff}")
    return NecklaceSum(direct, transfer, cutoff ** (m - 2))
