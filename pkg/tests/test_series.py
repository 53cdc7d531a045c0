from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cosmero.errors import ValidationError
from cosmero.series import (LaurentSeries, Poly, QSeries, RationalFunctionValue, as_rational,
                            gbinom, series_derivative, series_scale, series_shift)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
qcoeffs = st.dictionaries(st.integers(0, 7), rationals, max_size=6)


def qs(d, order=8):
    return QSeries(d, order)


@given(qcoeffs, qcoeffs, qcoeffs)
def test_qseries_ring_laws(a, b, c):
    a, b, c = qs(a), qs(b), qs(c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QSeries({}, 8)


@given(qcoeffs, qcoeffs)
def test_qseries_product_matches_sympy(a, b):
    q = sp.Symbol("q")
    pa = sum(sp.Rational(v.numerator, v.denominator) * q ** n for n, v in a.items())
    pb = sum(sp.Rational(v.numerator, v.denominator) * q ** n for n, v in b.items())
    prod = sp.Poly(sp.expand(pa * pb), q) if (pa * pb) != 0 else None
    got = qs(a) * qs(b)
    for n in range(8):
        want = prod.coeff_monomial(q ** n) if prod is not None else 0
        assert got.coefficient(n) == Fraction(int(sp.fraction(want)[0]), int(sp.fraction(want)[1]))


def test_qseries_truncation_and_json():
    s = QSeries({0: Fraction(-1, 12), 1: 2, 2: 6}, 3)
    assert s.to_json() == {"order": 3, "coefficients": {"0": "-1/12", "1": "2", "2": "6"}}
    assert QSeries.from_json(s.to_json()) == s
    assert s.truncate(2).coefficient(1) == 2
    assert (s * s).order == 3


def test_as_rational_rejects_floats_with_noise():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational(5) == Fraction(5)


@pytest.mark.parametrize("n,m", [(-1, 3), (-3, 2), (4, 2), (-2, 0)])
def test_gbinom_matches_sympy(n, m):
    assert gbinom(n, m) == sp.binomial(n, m)


def test_laurent_derivative_and_shift():
    z = sp.Symbol("z")
    s = LaurentSeries({-2: 1, 0: Fraction(1, 3), 3: 2}, 6)
    d = series_derivative(s)
    assert d.coefficient(-3) == -2
    assert d.coefficient(2) == 6
    # shift of a polynomial part agrees with sympy expansion of f(z + c)
    p = LaurentSeries({0: 1, 1: 2, 3: 5}, 6)
    sh = series_shift(p, Fraction(1, 2))
    expr = sp.expand(1 + 2 * (z + sp.Rational(1, 2)) + 5 * (z + sp.Rational(1, 2)) ** 3)
    for n in range(4):
        c = sp.Poly(expr, z).coeff_monomial(z ** n)
        assert sh.coefficient(n) == Fraction(int(sp.fraction(c)[0]), int(sp.fraction(c)[1]))


def test_laurent_scale_weight():
    s = LaurentSeries({-1: 1, 1: 1}, 4)
    t = series_scale(s, 2, weight=1)
    assert t.coefficient(-1) == 1 and t.coefficient(1) == 4


poly_terms = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), rationals, max_size=5)


@given(poly_terms, poly_terms)
def test_poly_ring_and_derivative_leibniz(a, b):
    p, r = Poly(2, a), Poly(2, b)
    assert (p * r).derivative(0) == p.derivative(0) * r + p * r.derivative(0)
    assert p + r - r == p


def test_poly_divide_by_difference():
    z1, z2 = Poly.variable(0, 2), Poly.variable(1, 2)
    num = (z1 - z2) ** 2 * (z1 + 3)
    assert num.divide_by_difference(0, 1) == (z1 - z2) * (z1 + 3)
    assert (z1 + 3).divide_by_difference(0, 1) is None


def test_rational_function_reduces_and_differentiates():
    v = RationalFunctionValue.difference_power(0, 1, 2, 2)
    assert v.pole_order(0, 1) == 2
    d = v.derivative(0)
    assert d.pole_order(0, 1) == 3
    assert d == RationalFunctionValue.difference_power(0, 1, 3, 2, coeff=-2)
    # (z1 - z2) * (z1 - z2)^-2 cancels one order
    lin = RationalFunctionValue(Poly.difference(0, 1, 2))
    assert (lin * v).pole_order(0, 1) == 1


def test_rational_function_rejects_non_diagonal_poles():
    with pytest.raises((ValidationError, ValueError)):
        RationalFunctionValue(Poly.constant(1, 2), {(0, 0): 1})
