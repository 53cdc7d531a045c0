import cmath
import math
import random
from fractions import Fraction

import pytest
import sympy as sp

from cosmero.elliptic import (c_coeff, c_prefactor, d_coeff, evaluate_expansion, expand_difference,
                              p0, p1, p2, p2_qz, p_function, pk, verify_expansion_identities,
                              weierstrass_lattice)
from cosmero.errors import DomainError
from cosmero.quasimodular import eisenstein_eval
from cosmero.series import LaurentSeries, QSeries


def frac(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


def test_p2_matches_closed_form_expansion():
    # q^0 part: exp(z)/(exp(z)-1)^2 = 1/(4 sinh^2(z/2)); q^N part: 2 sigma_{2m+1}(N)/(2m)! z^(2m)
    z = sp.Symbol("z")
    nz, nq = 10, 8
    q0 = sp.series(1 / (4 * sp.sinh(z / 2) ** 2), z, 0, nz).removeO()
    got = p2(nz, nq).series
    for n in range(-2, nz):
        c = got.coefficient(n)
        if not isinstance(c, QSeries):
            c = QSeries.constant(c)
        assert c.coefficient(0) == frac(q0.coeff(z, n))
        for N in range(1, nq):
            want = Fraction(2 * int(sp.divisor_sigma(N, n + 1)), math.factorial(n)) if n >= 0 and n % 2 == 0 else 0
            assert c.coefficient(N) == want


def test_derivative_chain():
    assert p2(12, 20).same_function(-p1(13, 20).derivative())
    assert p1(12, 20).same_function(-p0(13, 20).derivative())


@pytest.mark.parametrize("k", range(1, 8))
def test_pk_leading_pole(k):
    p = p_function(k, 6, 4)
    assert p.series.valuation == -k
    assert p.series.coefficient(-k).coefficient(0) == 1


def test_pk_requires_k_at_least_three():
    with pytest.raises(DomainError):
        pk(2, 5, 5)
    assert pk(3, 5, 5).same_function(p_function(3, 5, 5))


def test_p2_from_derivative_formula_agrees():
    assert p_function(2, 10, 10).same_function(p2(10, 10))


def test_c_and_d_symmetry():
    for k in range(1, 7):
        for l in range(1, 7):
            assert c_coeff(k, l, 10) == c_coeff(l, k, 10)
            sign = (-1) ** (k + l)
            assert d_coeff(k, l, 6, 8).same_function(d_coeff(l, k, 6, 8) * sign)


def test_c_prefactor_values():
    assert c_prefactor(1, 1) == 1
    assert c_prefactor(2, 1) == -2
    assert c_prefactor(2, 3) == Fraction(-24, 2)


def test_expansion_identities_hold():
    rep = verify_expansion_identities(6, 8, 4)
    assert rep["ok"], rep
    assert all(v["checked"] > 0 for k, v in rep.items() if k != "ok")


def test_expand_difference_of_pole():
    # 1/(z-w) = sum_m w^m z^(-m-1) for |w| < |z|
    s = LaurentSeries({-1: 1})
    b = expand_difference(s, "w<z", 6)
    for m in range(6):
        assert b.coefficient(-m - 1, m) == 1
    # and -sum z^m w^(-m-1) for |z| < |w|
    b = expand_difference(s, "z<w", 6)
    for m in range(6):
        assert b.coefficient(m, -m - 1) == -1
    with pytest.raises(DomainError):
        b.coefficient(7, -8)


def test_numeric_p2_three_ways():
    rng = random.Random(5)
    expansion = p2(24, 30)
    for _ in range(5):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5))
        z = cmath.rect(rng.uniform(0.1, 0.5), rng.uniform(0, 2 * math.pi))
        a = p2_qz(tau, z)
        b = evaluate_expansion(expansion, tau, z)
        assert abs(a - b) <= 1e-10 * abs(a)
        lattice = weierstrass_lattice(z, tau, cutoff=40) + complex(eisenstein_eval(2, tau))
        assert abs(lattice - a) <= 1e-5 * abs(a)


def test_p2_qz_domain():
    with pytest.raises(DomainError):
        p2_qz(1j, 0)
    with pytest.raises(DomainError):
        p2_qz(1j, 10)
    with pytest.raises(DomainError):
        evaluate_expansion(p0(5, 5), 1j, 0.2)
