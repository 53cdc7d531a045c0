"""Bernoulli numbers, Eisenstein series and the ring Q[E2, E4, E6].

Eisenstein series use the normalisation

    E_k(q) = -B_k / k! + 2/(k-1)! * sum_{n>=1} sigma_{k-1}(n) q^n,

for even ``k >= 2``, and ``E_k = 0`` for odd ``k``.  With this convention
``E_2 = -1/12 + 2q + 6q^2 + ...``.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import DomainError
from .linalg import rank, solve
from .series import QSeries, as_rational

__all__ = [
    "bernoulli",
    "divisor_sum",
    "divisor_sums",
    "eisenstein_q",
    "eisenstein_eval",
    "EisensteinValue",
    "QuasimodularElement",
    "E2",
    "E4",
    "E6",
    "monomials_of_weight",
    "relations_in_weight",
    "eisenstein_in_ring",
]


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(math.comb(m + 1, j) * b[j] for j in range(m))
        b.append(-s / (m + 1))
    return tuple(b)


def bernoulli(k: int) -> Fraction:
    """``B_k`` from ``t/(e^t - 1) = sum B_k t^k / k!`` (so ``B_1 = -1/2``)."""
    if k < 0:
        raise DomainError("Bernoulli index must be non-negative")
    if k > 1 and k % 2:
        return Fraction(0)
    # tables are cached by size; round up so nearby calls share one
    return _bernoulli_table(max(16, (k + 15) // 16 * 16))[k]


def divisor_sum(power: int, n: int) -> int:
    """``sigma_power(n) = sum_{d | n} d**power`` by trial division."""
    if n < 1:
        raise DomainError("divisor sums need n >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** power
            e = n // d
            if e != d:
                total += e ** power
        d += 1
    return total


def divisor_sums(power: int, upto: int) -> list:
    """``[sigma_power(n) for n in range(upto)]`` by sieve (entry 0 is 0)."""
    s = [0] * max(upto, 1)
    for d in range(1, upto):
        dp = d ** power
        for m in range(d, upto, d):
            s[m] += dp
    return s


def eisenstein_q(k: int, order: int) -> QSeries:
    """q-expansion of ``E_k`` through ``q^(order-1)``."""
    if k < 2:
        raise DomainError("Eisenstein series need k >= 2")
    if order < 0:
        raise DomainError("truncation order must be non-negative")
    if k % 2:
        return QSeries({}, order)
    c = {0: -bernoulli(k) / math.factorial(k)}
    pref = Fraction(2, math.factorial(k - 1))
    for n, s in enumerate(divisor_sums(k - 1, order)):
        if n:
            c[n] = pref * s
    return QSeries(c, order)


class EisensteinValue(complex):
    """A complex value that also carries a bound on the discarded tail."""

    def __new__(cls, value, tail_bound):
        self = super().__new__(cls, value)
        self.tail_bound = tail_bound
        return self


def _nome(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError("tau must lie in the upper half plane")
    return cmath.exp(2j * cmath.pi * tau)


def eisenstein_eval(k: int, tau: complex, order: int = 40) -> EisensteinValue:
    """Numeric ``E_k(tau)`` summed through ``q^(order-1)``.

    ``tail_bound`` bounds the omitted terms using ``sigma_{k-1}(n) <= n^k``.
    """
    q = _nome(tau)
    if k < 2:
        raise DomainError("Eisenstein series need k >= 2")
    if k % 2:
        return EisensteinValue(0j, 0.0)
    series = eisenstein_q(k, order)
    # Horner from the top keeps the large-k coefficients in range
    val = 0j
    for n in range(order - 1, -1, -1):
        val = val * q + float(series.coefficient(n))
    r = abs(q)
    pref = 2.0 / math.factorial(k - 1)
    big_n = max(order, 1)
    rho = ((big_n + 1) / big_n) ** k * r
    if rho >= 1:
        tail = math.inf
    else:
        tail = pref * big_n ** k * r ** big_n / (1 - rho)
    return EisensteinValue(val, tail)


# ---------------------------------------------------------------------------
# the weighted polynomial ring


def _weight(mono) -> int:
    a, b, c = mono
    return 2 * a + 4 * b + 6 * c


class QuasimodularElement:
    """Polynomial in E2, E4, E6 with rational coefficients.

    Monomials are exponent triples ``(a, b, c)`` of weight ``2a + 4b + 6c``.
    """

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        t = {}
        for m, v in (terms or {}).items():
            m = tuple(int(x) for x in m)
            if len(m) != 3 or min(m) < 0:
                raise DomainError(f"bad monomial {m}")
            v = as_rational(v)
            if v:
                t[m] = t.get(m, 0) + v
        self._t = {m: v for m, v in t.items() if v}

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0): c})

    def terms(self):
        return sorted(self._t.items())

    def is_zero(self):
        return not self._t

    def weights(self) -> set:
        """Weights of the monomials present; the zero element has none listed."""
        return {_weight(m) for m in self._t}

    def is_homogeneous(self, weight=None) -> bool:
        ws = self.weights()
        if not ws:
            return True
        if len(ws) != 1:
            return False
        return weight is None or ws == {weight}

    def component(self, weight: int) -> "QuasimodularElement":
        return QuasimodularElement({m: v for m, v in self._t.items() if _weight(m) == weight})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuasimodularElement.constant(other)
        t = dict(self._t)
        for m, v in other._t.items():
            t[m] = t.get(m, 0) + v
        return QuasimodularElement(t)

    __radd__ = __add__

    def __neg__(self):
        return QuasimodularElement({m: -v for m, v in self._t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuasimodularElement({m: v * other for m, v in self._t.items()})
        if not isinstance(other, QuasimodularElement):
            return NotImplemented
        t = {}
        for m1, v1 in self._t.items():
            for m2, v2 in other._t.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                t[m] = t.get(m, 0) + v1 * v2
        return QuasimodularElement(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = QuasimodularElement.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, QuasimodularElement):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def to_qseries(self, order: int) -> QSeries:
        gens = [eisenstein_q(k, order) for k in (2, 4, 6)]
        total = QSeries({}, order)
        for (a, b, c), v in self._t.items():
            term = QSeries.constant(v, order)
            for g, e in zip(gens, (a, b, c)):
                for _ in range(e):
                    term = term * g
            total = total + term
        return total

    def __repr__(self):
        if not self._t:
            return "0"
        parts = []
        for (a, b, c), v in self.terms():
            mono = "*".join(f"E{k}^{e}" if e > 1 else f"E{k}"
                            for k, e in ((2, a), (4, b), (6, c)) if e)
            parts.append(f"{v}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


E2 = QuasimodularElement({(1, 0, 0): 1})
E4 = QuasimodularElement({(0, 1, 0): 1})
E6 = QuasimodularElement({(0, 0, 1): 1})


def monomials_of_weight(weight: int, with_e2: bool = True) -> list:
    out = []
    for a, b, c in product(range(weight // 2 + 1), range(weight // 4 + 1), range(weight // 6 + 1)):
        if _weight((a, b, c)) == weight and (with_e2 or a == 0):
            out.append((a, b, c))
    return sorted(out)


def relations_in_weight(weight: int, order: int | None = None) -> int:
    """Number of independent Q-linear relations among weight-``weight`` monomials.

    Counted from q-expansions, so a zero result certifies independence.
    """
    monos = monomials_of_weight(weight)
    if order is None:
        order = len(monos) + 8
    rows = [QuasimodularElement({m: 1}).to_qseries(order) for m in monos]
    vecs = [[s.coefficient(n) for n in range(order)] for s in rows]
    return len(monos) - rank(vecs)


def eisenstein_in_ring(k: int, order: int | None = None) -> QuasimodularElement:
    """``E_k`` written as a polynomial in E4, E6 (E2 itself for ``k = 2``)."""
    if k < 2:
        raise DomainError("Eisenstein series need k >= 2")
    if k % 2:
        return QuasimodularElement()
    if k == 2:
        return E2
    monos = monomials_of_weight(k, with_e2=False)
    if order is None:
        order = len(monos) + 6
    target = eisenstein_q(k, order)
    cols = [QuasimodularElement({m: 1}).to_qseries(order) for m in monos]
    a = [[c.coefficient(n) for c in cols] for n in range(order)]
    b = [target.coefficient(n) for n in range(order)]
    x = solve(a, b)
    if x is None:
        raise DomainError(f"E_{k} not found in Q[E4, E6] at q-order {order}")
    return QuasimodularElement({m: v for m, v in zip(monos, x)})
