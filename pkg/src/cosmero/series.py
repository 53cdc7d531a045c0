"""Exact truncated series and rational-function arithmetic.

Three containers live here:

* :class:`QSeries` -- power series in ``q`` with :class:`~fractions.Fraction`
  coefficients and an explicit truncation order.
* :class:`LaurentSeries` -- Laurent series in ``z`` whose coefficients may be
  rationals, complex floats or :class:`QSeries`.
* :class:`RationalFunctionValue` -- a polynomial in ``z_0, ..., z_{n-1}``
  divided by a product of powers of pairwise differences ``z_i - z_j``.

Truncation orders are data.  ``order=None`` means the value is exact (a finite
polynomial); an integer ``N`` means coefficients of exponents ``>= N`` are
unknown, not zero.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct
from math import comb, factorial

from .errors import DomainError, TruncationError, ValidationError

__all__ = [
    "as_rational",
    "QSeries",
    "LaurentSeries",
    "Poly",
    "RationalFunctionValue",
    "series_shift",
    "series_derivative",
    "series_scale",
    "rf_add",
    "rf_multiply",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ValidationError(f"not a rational: {x!r}")
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {x!r}") from exc
    raise ValidationError(f"not a rational: {x!r}")


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_order(a, b):
    if a is None or b is None:
        return None
    return a + b


def _is_zero(c) -> bool:
    if isinstance(c, QSeries):
        return c.is_zero()
    return c == 0


def gbinom(n: int, m: int) -> int:
    """Generalised binomial coefficient, valid for negative ``n``."""
    if m < 0:
        return 0
    if n >= 0:
        return comb(n, m)
    num = 1
    for i in range(m):
        num *= n - i
    return num // factorial(m)


# ---------------------------------------------------------------------------
# q-series


class QSeries:
    """Truncated power series in ``q`` with exact rational coefficients."""

    __slots__ = ("_c", "order")

    def __init__(self, coeffs=None, order: int | None = None):
        if order is not None:
            order = int(order)
            if order < 0:
                raise DomainError("truncation order must be non-negative")
        c = {}
        for n, v in (coeffs or {}).items():
            n = int(n)
            if n < 0:
                raise DomainError("q-series exponents must be non-negative")
            if order is not None and n >= order:
                continue
            v = as_rational(v)
            if v:
                c[n] = v
        self._c = c
        self.order = order

    @classmethod
    def constant(cls, value, order=None) -> "QSeries":
        return cls({0: value}, order)

    def coefficient(self, n: int) -> Fraction:
        if self.order is not None and n >= self.order:
            raise TruncationError(f"coefficient of q^{n} unknown (order {self.order})")
        return self._c.get(n, Fraction(0))

    __getitem__ = coefficient

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    @property
    def valuation(self):
        """Lowest known nonzero exponent; the order if nothing is known."""
        if self._c:
            return min(self._c)
        return self.order

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self._c, _min_order(self.order, order))

    def _coerce(self, other):
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries({0: other}, None)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for n, v in other._c.items():
            c[n] = c.get(n, 0) + v
        return QSeries(c, _min_order(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return QSeries({n: -v for n, v in self._c.items()}, self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries({n: v * other for n, v in self._c.items()}, self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        va, vb = self.valuation, other.valuation
        order = _min_order(_add_order(self.order, vb), _add_order(other.order, va))
        c = {}
        for n, a in self._c.items():
            for m, b in other._c.items():
                k = n + m
                if order is not None and k >= order:
                    continue
                c[k] = c.get(k, 0) + a * b
        return QSeries(c, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries({0: other}, None)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self._c == other._c

    def agrees_with(self, other: "QSeries") -> bool:
        """Equality of the coefficients both series know."""
        n = _min_order(self.order, other.order)
        if n is None:
            return self._c == other._c
        return self.truncate(n)._c == other.truncate(n)._c

    def __hash__(self):
        return hash((self.order, frozenset(self._c.items())))

    def evaluate(self, q: complex) -> complex:
        return sum(complex(v) * q ** n for n, v in self._c.items())

    def __repr__(self):
        terms = " + ".join(f"({v})*q^{n}" for n, v in self.items()) or "0"
        tail = "" if self.order is None else f" + O(q^{self.order})"
        return f"QSeries({terms}{tail})"

    def to_json(self) -> dict:
        """``{exponent: "p/q"}`` coefficient map (zeros omitted) plus order."""
        return {
            "order": self.order,
            "coefficients": {str(n): str(v) for n, v in self.items()},
        }

    @classmethod
    def from_json(cls, data) -> "QSeries":
        return cls({int(k): as_rational(v) for k, v in data["coefficients"].items()},
                   data.get("order"))


# ---------------------------------------------------------------------------
# Laurent series in z


class LaurentSeries:
    """Laurent series in ``z`` truncated at ``order`` (``None``: exact).

    Coefficients may be Fractions, complex numbers or QSeries; the class only
    needs them to support ``+``, ``*`` with integers/scalars and a zero test.
    """

    __slots__ = ("_c", "order")

    def __init__(self, coeffs=None, order: int | None = None):
        c = {}
        for n, v in (coeffs or {}).items():
            n = int(n)
            if order is not None and n >= order:
                continue
            if isinstance(v, int) and not isinstance(v, bool):
                v = Fraction(v)
            if not _is_zero(v):
                c[n] = v
        self._c = c
        self.order = None if order is None else int(order)

    @classmethod
    def monomial(cls, n: int, coeff=1, order=None) -> "LaurentSeries":
        return cls({n: coeff}, order)

    def coefficient(self, n: int):
        if self.order is not None and n >= self.order:
            raise TruncationError(f"coefficient of z^{n} unknown (order {self.order})")
        return self._c.get(n, Fraction(0))

    __getitem__ = coefficient

    def items(self):
        return sorted(self._c.items())

    def exponents(self):
        return sorted(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def valuation(self):
        if self._c:
            return min(self._c)
        return self.order

    @property
    def lowest_order(self):
        return self.valuation

    def truncate(self, order: int) -> "LaurentSeries":
        return LaurentSeries(self._c, _min_order(self.order, order))

    def map_coefficients(self, f) -> "LaurentSeries":
        return LaurentSeries({n: f(v) for n, v in self._c.items()}, self.order)

    def _scalar(self, other):
        return isinstance(other, (int, Fraction, complex, float, QSeries))

    def __add__(self, other):
        if self._scalar(other):
            other = LaurentSeries({0: other}, None)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        c = dict(self._c)
        for n, v in other._c.items():
            c[n] = c[n] + v if n in c else v
        return LaurentSeries(c, _min_order(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({n: -v for n, v in self._c.items()}, self.order)

    def __sub__(self, other):
        if self._scalar(other):
            other = LaurentSeries({0: other}, None)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._scalar(other):
            return LaurentSeries({n: v * other for n, v in self._c.items()}, self.order)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        va, vb = self.valuation, other.valuation
        order = _min_order(_add_order(self.order, vb), _add_order(other.order, va))
        c = {}
        for n, a in self._c.items():
            for m, b in other._c.items():
                k = n + m
                if order is not None and k >= order:
                    continue
                t = a * b
                c[k] = c[k] + t if k in c else t
        return LaurentSeries(c, order)

    def __rmul__(self, other):
        if self._scalar(other):
            return LaurentSeries({n: other * v for n, v in self._c.items()}, self.order)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.order == other.order and self._c == other._c

    def __hash__(self):
        return hash((self.order, frozenset(self._c.items())))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        n = _min_order(self.order, other.order)
        a = self if n is None else self.truncate(n)
        b = other if n is None else other.truncate(n)
        return a._c == b._c

    def derivative(self) -> "LaurentSeries":
        return series_derivative(self)

    def shift(self, c, order=None) -> "LaurentSeries":
        return series_shift(self, c, order)

    def scale(self, lam, weight: int = 0) -> "LaurentSeries":
        return series_scale(self, lam, weight)

    def evaluate(self, z, coefficient=None):
        """Numerically sum the known terms at ``z``.

        ``coefficient`` maps a stored coefficient to a number (for QSeries
        coefficients pass e.g. ``lambda s: s.evaluate(q)``).
        """
        f = coefficient or (lambda v: complex(v))
        return sum(f(v) * z ** n for n, v in self._c.items())

    def __repr__(self):
        terms = " + ".join(f"({v})*z^{n}" for n, v in self.items()) or "0"
        tail = "" if self.order is None else f" + O(z^{self.order})"
        return f"LaurentSeries({terms}{tail})"


def series_derivative(s: LaurentSeries) -> LaurentSeries:
    """Termwise ``d/dz``; a truncated input loses one order."""
    order = None if s.order is None else s.order - 1
    return LaurentSeries({n - 1: v * n for n, v in s._c.items() if n != 0}, order)


def series_shift(s: LaurentSeries, c, order: int | None = None) -> LaurentSeries:
    """Re-expand ``s(z + c)`` around ``z = 0``.

    Polynomial input gives an exact result.  Negative powers expand as
    ``(z + c)^n = sum_m binom(n, m) c^(n - m) z^m`` (valid for ``|z| < |c|``),
    an infinite series, so an explicit output ``order`` is required then.
    A truncated input keeps its truncation order: the result is the
    re-expansion of the known part.
    """
    if _is_zero(c):
        return s if order is None else s.truncate(order)
    if isinstance(c, int):
        c = Fraction(c)
    negative = any(n < 0 for n in s._c)
    out_order = s.order
    if negative:
        if order is None:
            raise DomainError("shifting a series with a pole at the origin needs an output order")
        out_order = _min_order(out_order, order)
    elif order is not None:
        out_order = _min_order(out_order, order)
    res = {}
    for n, v in s._c.items():
        if n >= 0:
            ms = range(n + 1)
        else:
            ms = range(out_order)
        for m in ms:
            if out_order is not None and m >= out_order:
                break
            t = v * (gbinom(n, m) * c ** (n - m))
            res[m] = res[m] + t if m in res else t
    return LaurentSeries(res, out_order)


def series_scale(s: LaurentSeries, lam, weight: int = 0) -> LaurentSeries:
    """``lam**weight * s(lam * z)``."""
    if lam == 0:
        raise DomainError("scaling factor must be invertible")
    if isinstance(lam, int):
        lam = Fraction(lam)
    return LaurentSeries({n: v * lam ** (n + weight) for n, v in s._c.items()}, s.order)


# ---------------------------------------------------------------------------
# multivariate polynomials


class Poly:
    """Sparse polynomial over Q in ``nvars`` variables."""

    __slots__ = ("nvars", "_t")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        t = {}
        for e, v in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise ValidationError(f"exponent {e} has wrong length for {nvars} variables")
            v = as_rational(v) if not isinstance(v, Fraction) else v
            if v:
                t[e] = t.get(e, 0) + v
                if not t[e]:
                    del t[e]
        self._t = t

    @classmethod
    def _raw(cls, nvars, t):
        p = object.__new__(cls)
        p.nvars = nvars
        p._t = t
        return p

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def difference(cls, i: int, j: int, nvars: int) -> "Poly":
        """``z_i - z_j``."""
        return cls.variable(i, nvars) - cls.variable(j, nvars)

    def terms(self):
        return sorted(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.nvars)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._t == other._t

    def __hash__(self):
        return hash((self.nvars, frozenset(self._t.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.nvars)
        if not isinstance(other, Poly):
            return NotImplemented
        t = dict(self._t)
        for e, v in other._t.items():
            w = t.get(e, 0) + v
            if w:
                t[e] = w
            else:
                t.pop(e, None)
        return Poly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -v for e, v in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(self.nvars, {})
            return Poly._raw(self.nvars, {e: v * other for e, v in self._t.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        t = {}
        for e1, v1 in self._t.items():
            for e2, v2 in other._t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                w = t.get(e, 0) + v1 * v2
                if w:
                    t[e] = w
                else:
                    t.pop(e, None)
        return Poly._raw(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def total_degree(self) -> int:
        return max((sum(e) for e in self._t), default=-1)

    def homogeneous_degree(self):
        """Common total degree of all terms, or None (zero or inhomogeneous)."""
        degs = {sum(e) for e in self._t}
        return degs.pop() if len(degs) == 1 else None

    def derivative(self, i: int) -> "Poly":
        t = {}
        for e, v in self._t.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = v * e[i]
        return Poly._raw(self.nvars, t)

    def permute(self, perm) -> "Poly":
        """Rename variable ``i`` to ``perm[i]``."""
        t = {}
        for e, v in self._t.items():
            f = [0] * self.nvars
            for i, a in enumerate(e):
                f[perm[i]] = a
            t[tuple(f)] = v
        return Poly._raw(self.nvars, t)

    def evaluate(self, point):
        total = 0
        for e, v in self._t.items():
            term = v
            for x, a in zip(point, e):
                if a:
                    term *= x ** a
            total += term
        return total

    def divide_by_difference(self, i: int, j: int):
        """Exact quotient by ``z_i - z_j``, or None when it does not divide."""
        by_deg = {}
        for e, v in self._t.items():
            f = list(e)
            a = f[i]
            f[i] = 0
            by_deg.setdefault(a, {})[tuple(f)] = v
        if not by_deg:
            return Poly._raw(self.nvars, {})
        n = max(by_deg)
        if n == 0:
            return None

        def shift_j(t):
            out = {}
            for e, v in t.items():
                f = list(e)
                f[j] += 1
                out[tuple(f)] = v
            return out

        b = {}
        cur = by_deg.get(n, {})
        b[n - 1] = cur
        for a in range(n - 1, 0, -1):
            nxt = dict(by_deg.get(a, {}))
            for e, v in shift_j(cur).items():
                w = nxt.get(e, 0) + v
                if w:
                    nxt[e] = w
                else:
                    nxt.pop(e, None)
            b[a - 1] = nxt
            cur = nxt
        rem = dict(by_deg.get(0, {}))
        for e, v in shift_j(cur).items():
            w = rem.get(e, 0) + v
            if w:
                rem[e] = w
            else:
                rem.pop(e, None)
        if rem:
            return None
        t = {}
        for a, part in b.items():
            for e, v in part.items():
                f = list(e)
                f[i] = a
                t[tuple(f)] = v
        return Poly._raw(self.nvars, t)

    def __repr__(self):
        if not self._t:
            return "0"
        parts = []
        for e, v in self.terms():
            mono = "*".join(f"z{i}^{a}" if a > 1 else f"z{i}" for i, a in enumerate(e) if a)
            parts.append(f"{v}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def to_json(self):
        return [[list(e), str(v)] for e, v in self.terms()]

    @classmethod
    def from_json(cls, nvars, data) -> "Poly":
        t = {}
        for e, v in data:
            e = tuple(int(a) for a in e)
            if any(a < 0 for a in e):
                raise ValidationError("negative exponent in polynomial")
            t[e] = t.get(e, 0) + as_rational(v)
        return cls(nvars, t)


# ---------------------------------------------------------------------------
# rational functions with poles on diagonals


def _norm_pair(i, j):
    if i == j:
        raise ValidationError("pole pair needs distinct variables")
    return (i, j) if i < j else (j, i)


class RationalFunctionValue:
    """``numerator / prod_{i<j} (z_i - z_j)^{e_ij}`` in reduced form.

    Reduced form: no difference with a positive exponent divides the
    numerator.  Since the differences are pairwise non-associate primes of
    ``Q[z]``, the reduced form is canonical and structural equality is
    equality of rational functions.
    """

    __slots__ = ("numerator", "poles")

    def __init__(self, numerator: Poly, poles=None):
        num = numerator
        pl = {}
        for (i, j), e in (poles or {}).items():
            e = int(e)
            if e < 0:
                raise ValidationError("pole orders must be non-negative")
            if e == 0:
                continue
            if not (0 <= i < num.nvars and 0 <= j < num.nvars):
                raise ValidationError(f"pole pair {(i, j)} outside {num.nvars} variables")
            if i > j and e % 2:
                num = -num
            p = _norm_pair(i, j)
            pl[p] = pl.get(p, 0) + e
        if num.is_zero():
            pl = {}
        for p in sorted(pl):
            while pl[p]:
                q = num.divide_by_difference(*p)
                if q is None:
                    break
                num = q
                pl[p] -= 1
            if not pl[p]:
                del pl[p]
        self.numerator = num
        self.poles = pl

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    @classmethod
    def constant(cls, c, nvars: int):
        return cls(Poly.constant(c, nvars))

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p)

    @classmethod
    def difference_power(cls, i: int, j: int, e: int, nvars: int, coeff=1):
        """``coeff * (z_i - z_j)^(-e)``."""
        return cls(Poly.constant(coeff, nvars), {(i, j): e})

    def pole_order(self, i: int, j: int) -> int:
        return self.poles.get(_norm_pair(i, j), 0)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunctionValue.constant(other, self.nvars)
        if not isinstance(other, RationalFunctionValue):
            return NotImplemented
        return self.numerator == other.numerator and self.poles == other.poles

    def __hash__(self):
        return hash((self.numerator, frozenset(self.poles.items())))

    def _denominator_factor(self, extra) -> Poly:
        out = Poly.constant(1, self.nvars)
        for (i, j), e in extra.items():
            if e:
                out = out * Poly.difference(i, j, self.nvars) ** e
        return out

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunctionValue.constant(other, self.nvars)
        if not isinstance(other, RationalFunctionValue):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValidationError("rational functions over different variable sets")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        pl = dict(self.poles)
        for p, e in other.poles.items():
            pl[p] = max(pl.get(p, 0), e)
        na = self.numerator * self._denominator_factor(
            {p: e - self.poles.get(p, 0) for p, e in pl.items()})
        nb = other.numerator * self._denominator_factor(
            {p: e - other.poles.get(p, 0) for p, e in pl.items()})
        return RationalFunctionValue(na + nb, pl)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunctionValue(-self.numerator, self.poles)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunctionValue.constant(other, self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunctionValue(self.numerator * other, self.poles)
        if not isinstance(other, RationalFunctionValue):
            return NotImplemented
        if other.nvars != self.nvars:
            raise ValidationError("rational functions over different variable sets")
        pl = dict(self.poles)
        for p, e in other.poles.items():
            pl[p] = pl.get(p, 0) + e
        return RationalFunctionValue(self.numerator * other.numerator, pl)

    __rmul__ = __mul__

    def derivative(self, k: int) -> "RationalFunctionValue":
        """Partial derivative in ``z_k``."""
        n = self.nvars
        touching = {p: e for p, e in self.poles.items() if k in p}
        num = self.numerator.derivative(k)
        for p in touching:
            num = num * Poly.difference(*p, n)
        for p, e in touching.items():
            sign = 1 if p[0] == k else -1
            term = self.numerator * (-e * sign)
            for q in touching:
                if q != p:
                    term = term * Poly.difference(*q, n)
            num = num + term
        pl = dict(self.poles)
        for p in touching:
            pl[p] += 1
        return RationalFunctionValue(num, pl)

    def permute(self, perm) -> "RationalFunctionValue":
        """Rename variable ``i`` to ``perm[i]``."""
        pl = {}
        num = self.numerator.permute(perm)
        for (i, j), e in self.poles.items():
            a, b = perm[i], perm[j]
            if a > b and e % 2:
                num = -num
            pl[_norm_pair(a, b)] = e
        return RationalFunctionValue(num, pl)

    def degree(self):
        """Homogeneous degree (numerator degree minus total pole order), or None."""
        d = self.numerator.homogeneous_degree()
        if d is None:
            return None
        return d - sum(self.poles.values())

    def evaluate(self, point):
        den = 1
        for (i, j), e in self.poles.items():
            d = point[i] - point[j]
            if d == 0:
                raise DomainError(f"evaluation on the diagonal z{i} = z{j}")
            den *= d ** e
        num = self.numerator.evaluate(point)
        # keep exact inputs exact: int / int would give a float
        return num if den == 1 else num / den

    def __repr__(self):
        den = "*".join(f"(z{i}-z{j})^{e}" for (i, j), e in sorted(self.poles.items()))
        return f"({self.numerator})" + (f"/({den})" if den else "")

    def to_json(self):
        return {
            "numerator": self.numerator.to_json(),
            "pole_orders": [[i, j, e] for (i, j), e in sorted(self.poles.items())],
        }

    @classmethod
    def from_json(cls, nvars, data) -> "RationalFunctionValue":
        poles = {}
        for i, j, e in data.get("pole_orders", []):
            poles[(int(i), int(j))] = int(e)
        return cls(Poly.from_json(nvars, data["numerator"]), poles)


def rf_add(a: RationalFunctionValue, b: RationalFunctionValue) -> RationalFunctionValue:
    return a + b


def rf_multiply(a: RationalFunctionValue, b: RationalFunctionValue) -> RationalFunctionValue:
    return a * b


def monomials(nvars: int, max_degree: int):
    """All exponent tuples of total degree ``<= max_degree``."""
    for e in _iproduct(range(max_degree + 1), repeat=nvars):
        if sum(e) <= max_degree:
            yield e
