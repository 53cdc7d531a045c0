import cmath
import math
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cosmero.errors import DomainError
from cosmero.quasimodular import (E2, E4, E6, bernoulli, divisor_sum, divisor_sums, eisenstein_eval,
                                  eisenstein_in_ring, eisenstein_q, monomials_of_weight,
                                  relations_in_weight)


def frac(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


# B_1 is left out: its sign depends on the convention and nothing here uses it
@pytest.mark.parametrize("k", [0] + list(range(2, 21)))
def test_bernoulli_matches_sympy(k):
    assert bernoulli(k) == frac(sp.bernoulli(k))


def test_bernoulli_generating_function_values():
    # t/(e^t - 1) - 1 + t/2 = 1/12 t^2 - 1/720 t^4 + 1/30240 t^6 + ...
    assert [bernoulli(k) / math.factorial(k) for k in (2, 4, 6)] == [
        Fraction(1, 12), Fraction(-1, 720), Fraction(1, 30240)]


@given(st.integers(0, 5), st.integers(1, 300))
def test_divisor_sum_matches_sympy(p, n):
    assert divisor_sum(p, n) == sp.divisor_sigma(n, p)


def test_divisor_sums_table():
    table = divisor_sums(3, 7)
    assert table[0] == 0
    assert table[1:] == [divisor_sum(3, n) for n in range(1, 7)]


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10, 12])
def test_eisenstein_coefficients(k):
    s = eisenstein_q(k, 15)
    assert s.coefficient(0) == -bernoulli(k) / math.factorial(k)
    for n in range(1, 15):
        assert s.coefficient(n) == Fraction(2 * int(sp.divisor_sigma(n, k - 1)), math.factorial(k - 1))


def test_eisenstein_small_example():
    s = eisenstein_q(2, 3)
    assert [s.coefficient(n) for n in range(3)] == [Fraction(-1, 12), 2, 6]


@pytest.mark.parametrize("k", [3, 5, 7])
def test_odd_eisenstein_is_zero(k):
    assert eisenstein_q(k, 10).is_zero()


def test_weight_below_two_rejected():
    with pytest.raises(DomainError):
        eisenstein_q(1, 10)


def test_eisenstein_eval_matches_direct_sum():
    tau = complex(0.1, 1.1)
    q = cmath.exp(2j * math.pi * tau)
    direct = float(-bernoulli(6) / math.factorial(6)) + sum(
        2 / math.factorial(5) * float(sp.divisor_sigma(n, 5)) * q ** n for n in range(1, 60))
    v = eisenstein_eval(6, tau)
    assert abs(v - direct) < 1e-14
    assert v.tail_bound < 1e-20


def test_eisenstein_eval_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        eisenstein_eval(4, complex(0, -1))


def test_weight_relations_in_ring():
    # E_8 is proportional to E_4^2 and E_12 lies in the span of E_4^3, E_6^2
    assert eisenstein_in_ring(8) == E4 ** 2 * Fraction(3, 7)
    assert eisenstein_in_ring(12) == E6 ** 2 * Fraction(25, 143) + E4 ** 3 * Fraction(18, 143)
    assert relations_in_weight(12) == 0
    assert relations_in_weight(8) == 0


def test_ring_elements_expand_consistently():
    lhs = (E4 * E4).to_qseries(12)
    rhs = eisenstein_q(8, 12) * Fraction(7, 3)
    assert lhs == rhs
    assert (E2 * E4 * E6).to_qseries(8) == eisenstein_q(2, 8) * eisenstein_q(4, 8) * eisenstein_q(6, 8)


def test_monomials_of_weight_counts():
    # dimension of weight-k quasimodular forms: monomials E2^a E4^b E6^c with 2a+4b+6c = k
    for k in range(0, 20, 2):
        count = sum(1 for a in range(k // 2 + 1) for b in range(k // 4 + 1) for c in range(k // 6 + 1)
                    if 2 * a + 4 * b + 6 * c == k)
        assert len(monomials_of_weight(k)) == count
