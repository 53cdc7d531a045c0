"""Elliptic expansion functions P_0, P_1, P_2, P_k and the C/D coefficients.

Every expansion is a :class:`~cosmero.series.LaurentSeries` in ``z`` whose
coefficients are :class:`~cosmero.series.QSeries` in ``q = exp(2 pi i tau)``:

    P_2(z) = z^-2 + sum_{k>=2} (k-1) E_k z^(k-2)
    P_1(z) = z^-1 - sum_{k>=2} E_k z^(k-1)
    P_0(z) = -log z + sum_{k>=2} E_k z^k / k
    P_k(z) = (-1)^(k-1)/(k-1)! * d^(k-1)/dz^(k-1) P_1(z)

P_2 is built from its own formula rather than by differentiating P_1, so the
derivative relations between them are genuine checks.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .quasimodular import _nome, eisenstein_q
from .series import LaurentSeries, QSeries, gbinom, series_derivative

__all__ = [
    "PkExpansion",
    "p0",
    "p1",
    "p2",
    "pk",
    "p_function",
    "c_prefactor",
    "c_coeff",
    "d_coeff",
    "BivariateSeries",
    "expand_difference",
    "verify_expansion_identities",
    "evaluate_expansion",
    "p2_qz",
    "weierstrass_lattice",
]


@dataclass(frozen=True)
class PkExpansion:
    """Truncated double expansion of one P-function.

    ``log_coefficient`` is the coefficient of ``log z`` (principal branch);
    only P_0 carries one.
    """

    k: int
    series: LaurentSeries
    q_order: int
    log_coefficient: Fraction = Fraction(0)

    @property
    def z_order(self):
        return self.series.order

    def coefficient(self, n: int) -> QSeries:
        c = self.series.coefficient(n)
        return c if isinstance(c, QSeries) else QSeries.constant(c)

    def derivative(self) -> "PkExpansion":
        s = series_derivative(self.series)
        if self.log_coefficient:
            s = s + LaurentSeries({-1: QSeries.constant(self.log_coefficient)}, s.order)
        return PkExpansion(self.k, s, self.q_order)

    def __neg__(self):
        return PkExpansion(self.k, -self.series, self.q_order, -self.log_coefficient)

    def __mul__(self, c):
        return PkExpansion(self.k, self.series * c, self.q_order, self.log_coefficient * c)

    __rmul__ = __mul__

    def same_function(self, other: "PkExpansion") -> bool:
        """Exact equality of the jointly known coefficients (index ignored)."""
        if self.log_coefficient != other.log_coefficient:
            return False
        n = min(self.z_order, other.z_order)
        qn = min(self.q_order, other.q_order)
        a = self.series.truncate(n).map_coefficients(lambda s: _qtrunc(s, qn))
        b = other.series.truncate(n).map_coefficients(lambda s: _qtrunc(s, qn))
        return a == b

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "z_order": self.z_order,
            "q_order": self.q_order,
            "log_coefficient": str(self.log_coefficient),
            "coefficients": {str(n): {str(m): str(v) for m, v in _as_q(c).items()}
                             for n, c in self.series.items()},
        }


def _as_q(c) -> QSeries:
    return c if isinstance(c, QSeries) else QSeries.constant(c)


def _qtrunc(c, qn):
    return _as_q(c).truncate(qn)


def _check_orders(nz, nq):
    if nz < 1 or nq < 1:
        raise DomainError("truncation orders must be >= 1")


def p2(nz: int, nq: int) -> PkExpansion:
    """P_2 through ``z^(nz-1)`` and ``q^(nq-1)``."""
    _check_orders(nz, nq)
    c = {-2: QSeries.constant(1)}
    k = 2
    while k - 2 < nz:
        c[k - 2] = eisenstein_q(k, nq) * (k - 1)
        k += 1
    return PkExpansion(2, LaurentSeries(c, nz), nq)


def p1(nz: int, nq: int) -> PkExpansion:
    _check_orders(nz, nq)
    c = {-1: QSeries.constant(1)}
    k = 2
    while k - 1 < nz:
        c[k - 1] = -eisenstein_q(k, nq)
        k += 1
    return PkExpansion(1, LaurentSeries(c, nz), nq)


def p0(nz: int, nq: int) -> PkExpansion:
    """P_0 as ``-log z`` (flagged) plus a power series."""
    _check_orders(nz, nq)
    c = {}
    k = 2
    while k < nz:
        c[k] = eisenstein_q(k, nq) * Fraction(1, k)
        k += 1
    return PkExpansion(0, LaurentSeries(c, nz), nq, Fraction(-1))


def p_function(k: int, nz: int, nq: int) -> PkExpansion:
    """P_k for any ``k >= 1`` via the derivative formula (P_1 itself for k=1)."""
    if k < 1:
        raise DomainError("derivative formula needs k >= 1")
    _check_orders(nz, nq)
    s = p1(nz + k - 1, nq).series
    for _ in range(k - 1):
        s = series_derivative(s)
    pref = Fraction((-1) ** (k - 1), math.factorial(k - 1))
    return PkExpansion(k, s * pref, nq)


def pk(k: int, nz: int, nq: int) -> PkExpansion:
    if k < 3:
        raise DomainError("pk needs k >= 3; use p0, p1 or p2")
    return p_function(k, nz, nq)


def c_prefactor(k: int, l: int) -> Fraction:
    """``(-1)^(k+1) (k+l-1)! / ((k-1)! (l-1)!)``."""
    if k < 1 or l < 1:
        raise DomainError("C and D need k, l >= 1")
    return Fraction((-1) ** (k + 1) * math.factorial(k + l - 1),
                    math.factorial(k - 1) * math.factorial(l - 1))


def c_coeff(k: int, l: int, nq: int) -> QSeries:
    return eisenstein_q(k + l, nq) * c_prefactor(k, l)


def d_coeff(k: int, l: int, nz: int, nq: int) -> PkExpansion:
    """``D(k, l, z)`` as an expansion in ``z``."""
    return p_function(k + l, nz, nq) * c_prefactor(k, l)


# ---------------------------------------------------------------------------
# bivariate expansions


class BivariateSeries:
    """Coefficients of ``z^a w^b`` together with the region where they are known."""

    def __init__(self, coeffs, known):
        self.coeffs = coeffs
        self.known = known

    def coefficient(self, a, b):
        if not self.known(a, b):
            raise DomainError(f"coefficient of z^{a} w^{b} not determined")
        return self.coeffs.get((a, b), QSeries.constant(0))

    def __sub__(self, other):
        c = dict(self.coeffs)
        for key, v in other.coeffs.items():
            c[key] = c[key] - v if key in c else -v
        k1, k2 = self.known, other.known
        return BivariateSeries(c, lambda a, b: k1(a, b) and k2(a, b))


def expand_difference(s: LaurentSeries, domain: str, cutoff: int) -> BivariateSeries:
    """Expand ``s(z - w)`` as a double series.

    ``domain='w<z'`` expands negative powers in ``w/z`` (``|w| < |z|``),
    ``domain='z<w'`` in ``z/w``.  Infinite expansions keep ``cutoff`` terms.
    """
    if domain not in ("w<z", "z<w"):
        raise DomainError("domain must be 'w<z' or 'z<w'")
    out = {}

    def put(a, b, v):
        out[(a, b)] = out[(a, b)] + v if (a, b) in out else v

    for n, c in s.items():
        if n >= 0:
            for m in range(n + 1):
                put(n - m, m, c * (math.comb(n, m) * (-1) ** m))
        elif domain == "w<z":
            for m in range(cutoff):
                put(n - m, m, c * (gbinom(n, m) * (-1) ** m))
        else:
            for m in range(cutoff):
                put(m, n - m, c * (gbinom(n, m) * (-1) ** ((n + m) % 2)))
    order = s.order
    neg = [n for n, _ in s.items() if n < 0]

    def known(a, b):
        if order is not None and a + b >= order:
            return False
        if neg and a + b >= min(neg):
            if domain == "w<z" and b >= cutoff:
                return False
            if domain == "z<w" and a >= cutoff:
                return False
        return True

    return BivariateSeries(out, known)


def _cmp(lhs: QSeries, rhs: QSeries, nq: int) -> bool:
    return _qtrunc(lhs, nq) == _qtrunc(rhs, nq)


def verify_expansion_identities(nz: int = 8, nq: int = 12, kmax: int = 5) -> dict:
    """Check the bivariate expansion identities coefficient by coefficient.

    Exponents of ``z`` and ``w`` are compared through ``nz`` inclusive and
    q-coefficients through ``q^(nq-1)``.  Returns one entry per identity with
    the number of compared coefficients and the first failure (or None).
    """
    if nz < 2 or nq < 2:
        raise DomainError("orders must be >= 2")
    big = 2 * nz + kmax + 4
    report = {}

    def record(name, failure, checked):
        report[name] = {"ok": failure is None, "checked": checked, "first_failure": failure}

    # P_1(z - w) = sum_k P_k(z) w^(k-1), |w| < |z|
    failure, checked = None, 0
    lhs = expand_difference(p1(big, nq).series, "w<z", big)
    for k in range(1, kmax + 1):
        pk_s = p_function(k, nz + 1, nq)
        for a in range(-k, nz + 1):
            got = lhs.coefficient(a, k - 1)
            want = pk_s.coefficient(a)
            checked += 1
            if failure is None and not _cmp(got, want, nq):
                failure = {"k": k, "z": a, "w": k - 1}
    record("P1_shift", failure, checked)

    # P_2(z - w) - (z - w)^-2 = sum C(k, l) z^(l-1) w^(k-1)
    failure, checked = None, 0
    full = expand_difference(p2(big, nq).series, "w<z", big)
    pole = expand_difference(LaurentSeries({-2: QSeries.constant(1)}), "w<z", big)
    reg = full - pole
    for key, v in reg.coeffs.items():
        a, b = key
        if (a < 0 or b < 0) and reg.known(a, b) and not v.is_zero():
            failure = failure or {"z": a, "w": b, "reason": "singular remainder"}
    for a in range(nz + 1):
        for b in range(nz + 1):
            checked += 1
            if failure is None and not _cmp(reg.coefficient(a, b), c_coeff(b + 1, a + 1, nq), nq):
                failure = {"z": a, "w": b}
    record("P2_expansion", failure, checked)

    # P_{k+1}(z) - z^-(k+1) = (1/k) sum_l C(k, l) z^(l-1)
    failure, checked = None, 0
    for k in range(1, kmax + 1):
        s = p_function(k + 1, nz + 1, nq)
        for a in range(-(k + 1), nz + 1):
            got = s.coefficient(a)
            if a == -(k + 1):
                want = QSeries.constant(1)
            elif a < 0:
                want = QSeries.constant(0)
            else:
                want = c_coeff(k, a + 1, nq) * Fraction(1, k)
            checked += 1
            if failure is None and not _cmp(got, want, nq):
                failure = {"k": k, "z": a}
    record("Pk_expansion", failure, checked)

    # P_{k+1}(z - w) = (1/k) sum_l D(k, l, w) z^(l-1), |z| < |w|
    failure, checked = None, 0
    for k in range(1, kmax + 1):
        lhs = expand_difference(p_function(k + 1, big, nq).series, "z<w", big)
        for a in range(nz + 1):
            d = d_coeff(k, a + 1, nz + 1, nq)
            for b in range(-(k + a + 1), nz + 1):
                got = lhs.coefficient(a, b)
                want = d.coefficient(b) * Fraction(1, k)
                checked += 1
                if failure is None and not _cmp(got, want, nq):
                    failure = {"k": k, "z": a, "w": b}
    record("Pk_zw_expansion", failure, checked)
    report["ok"] = all(v["ok"] for v in report.values() if isinstance(v, dict))
    return report


# ---------------------------------------------------------------------------
# numerics


def evaluate_expansion(p: PkExpansion, tau: complex, z: complex) -> complex:
    """Sum the known terms of an expansion at numeric ``tau`` and ``z``."""
    if p.log_coefficient:
        raise DomainError("P_0 carries a logarithm; evaluate it only through its derivative")
    q = _nome(tau)
    return p.series.evaluate(z, lambda c: _as_q(c).evaluate(q))


def p2_qz(tau: complex, z: complex, order: int = 40) -> complex:
    """``P_2`` from ``q_z/(q_z-1)^2 + sum n q^n/(1-q^n) (q_z^n + q_z^-n)``.

    Used only where the sum converges, ``|q| < |q_z| < |q|^-1`` with
    ``q_z = exp(z)``.
    """
    q = _nome(tau)
    z = complex(z)
    qz = cmath.exp(z)
    if abs(z.real) < 1e-300 and abs(math.remainder(z.imag, 2 * math.pi)) < 1e-12:
        raise DomainError("P_2 has a pole at z in 2 pi i Z")
    if not abs(q) < abs(qz) < 1 / abs(q):
        raise DomainError("need |q| < |exp(z)| < 1/|q| for the q_z expansion")
    val = qz / (qz - 1) ** 2
    qn = 1
    for n in range(1, order + 1):
        qn *= q
        val += n * qn / (1 - qn) * (qz ** n + qz ** -n)
    return val


def weierstrass_lattice(z: complex, tau: complex, cutoff: int = 40) -> complex:
    """Raw lattice sum for the Weierstrass function with periods 2 pi i tau, 2 pi i.

    Slow; only meant as an independent reference.
    """
    z = complex(z)
    s1 = 2j * math.pi * complex(tau)
    s2 = 2j * math.pi
    val = z ** -2
    for m in range(-cutoff, cutoff + 1):
        for n in range(-cutoff, cutoff + 1):
            if m == 0 and n == 0:
                continue
            w = m * s1 + n * s2
            val += (z - w) ** -2 - w ** -2
    return val
