import random
from fractions import Fraction
from itertools import permutations, product
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cosmero.errors import DomainError, TruncationError
from cosmero.mero_model import (BetaTable, Cochain, ModelAlgebra, ModelCochain, apply_coboundary,
                                check_kg_property, check_pole_bounds, check_tg_property, fusion_expand,
                                pairing_cochain, reinsert, shuffle_complement, shuffle_sum, shuffles,
                                two_point_cochain)
from cosmero.series import Poly, RationalFunctionValue

T, Z1, Z2, ZETA = sp.symbols("t z1 z2 zeta")


def poly_to_sympy(p: Poly, names):
    return sum(sp.Rational(v.numerator, v.denominator) * sp.prod([s ** e for s, e in zip(names, exps)])
               for exps, v in p.terms())


def test_model_structure():
    m = ModelAlgebra(6)
    assert m.validate() == []
    assert m.commutator_ok()
    g = m.basis(3)
    # creation: inserting at z = 0 on the vacuum gives g back
    assert m.insert(g, 0, m.basis(0)) == g
    with pytest.raises(TruncationError):
        m.basis(7)


def test_insertion_is_linear_and_commutative():
    m = ModelAlgebra(4)
    n = 3
    z, w = Poly.variable(1, n), Poly.variable(2, n)
    a, b, h = m.basis(1, n), m.basis(2, n), m.basis(1, n) + m.basis(0, n)
    assert m.insert(a + b, z, h) == m.insert(a, z, h) + m.insert(b, z, h)
    assert m.insert(a, z, m.insert(b, w, h)) == m.insert(b, w, m.insert(a, z, h))


@pytest.mark.parametrize("l,b", [(1, 2), (2, 3), (3, 2)])
def test_pairing_cochain_values_and_tg(l, b):
    m = ModelAlgebra(3)
    F = pairing_cochain(m, l, b)
    zs = sp.symbols(f"z1:{l + 1}")
    for key in product(range(m.dim), repeat=l):
        expr = sp.expand(sp.prod([(T + zs[i]) ** a for i, a in enumerate(key)]))
        want = sp.Poly(expr, T).coeff_monomial(T ** b) if expr != 0 else 0
        got = poly_to_sympy(F.value(key).numerator, zs)
        assert sp.expand(got - want) == 0
    assert check_tg_property(F, m).ok
    # the sum of z-derivatives is the output-side translation: (b+1) F_{b+1}
    assert check_tg_property(F, m, pairing_cochain(m, l, b + 1) * (b + 1)).ok


def test_pairing_passes_at_full_degree():
    m = ModelAlgebra(6)
    F = pairing_cochain(m, 2, 3)
    assert check_tg_property(F, m).ok
    assert check_pole_bounds(F).ok


def test_tg_failure_reports_tuple():
    one = RationalFunctionValue.constant(1, 1)
    F = Cochain(1, 3, {(0,): one, (1,): one})
    rep = check_tg_property(F)
    assert not rep.ok
    assert {"tuple": [1], "slot": 1} in rep.violations
    assert check_tg_property(Cochain(1, 3)).ok


def test_kg_property():
    m = ModelAlgebra(5)
    F = pairing_cochain(m, 2, 3)
    rep = check_kg_property(F, 3, z_scaling=m.kg_z_scaling)
    assert rep.ok and rep.details["weights"] == [3]
    two = two_point_cochain(m)
    assert check_kg_property(two, -1).ok
    mixed = F + pairing_cochain(m, 2, 2)
    rep = check_kg_property(mixed, 3, z_scaling=-1)
    assert not rep.ok and rep.details["weights"] == [2, 3]
    assert check_kg_property(Cochain(2, 5), 17).ok


def test_pole_bounds():
    v = RationalFunctionValue.difference_power(0, 1, 3, 2)
    F = Cochain(2, 2, {(0, 0): v}, BetaTable(2))
    rep = check_pole_bounds(F)
    assert not rep.ok
    assert rep.violations == [{"tuple": [0, 0], "pair": [1, 2], "order": 3, "bound": 2}]
    assert check_pole_bounds(pairing_cochain(ModelAlgebra(4), 2, 1)).ok
    two = two_point_cochain(ModelAlgebra(4))
    rep = check_pole_bounds(two)
    assert rep.ok and rep.details["max_orders"] == [[1, 2, 5]]


@pytest.mark.parametrize("l", range(1, 7))
def test_shuffle_count(l):
    for p in range(l + 1):
        assert len(shuffles(l, p)) == comb(l, p)


def test_symmetric_cochain_shuffles_to_zero():
    z1, z2 = Poly.variable(0, 2), Poly.variable(1, 2)
    sym = RationalFunctionValue(z1 * z2 + z1 + z2)
    F = Cochain(2, 1, {(0, 0): sym, (1, 1): sym, (0, 1): RationalFunctionValue(z1 + z2),
                       (1, 0): RationalFunctionValue(z1 + z2)})
    assert shuffle_sum(F, 1).is_zero()


def inversions(p):
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


def brute_shuffle_value(F, p, key, point):
    """Sum over all of S_l, keeping order-preserving blocks, evaluated at a point."""
    l = F.l
    total = Fraction(0)
    for s in permutations(range(l)):
        if list(s[:p]) != sorted(s[:p]) or list(s[p:]) != sorted(s[p:]):
            continue
        inv = [0] * l
        for i, v in enumerate(s):
            inv[v] = i
        # (rho F)(x) = F(x_rho(1), ...) with rho the inverse shuffle
        k = tuple(key[inv[j]] for j in range(l))
        pt = [point[inv[j]] for j in range(l)]
        total += (-1) ** inversions(s) * F.value(k).evaluate(pt)
    return total


def random_cochain(rng, l, degree=1):
    vals = {}
    for key in product(range(degree + 1), repeat=l):
        terms = {tuple(rng.randint(0, 2) for _ in range(l)): rng.randint(-3, 3) for _ in range(2)}
        v = RationalFunctionValue(Poly(l, terms))
        if rng.random() < 0.5 and l >= 2:
            v = v * RationalFunctionValue.difference_power(0, 1, rng.randint(1, 2), l)
        vals[key] = v
    return Cochain(l, degree, vals, BetaTable(4))


@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_shuffle_sum_against_full_permutation_oracle(seed, l):
    rng = random.Random(seed)
    F = random_cochain(rng, l)
    point = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) + 100 * i for i in range(l)]
    for p in range(1, l):
        S = shuffle_sum(F, p)
        for key in product(range(2), repeat=l):
            assert S.value(key).evaluate(point) == brute_shuffle_value(F, p, key, point)


@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_shuffle_complement_identity(seed, l):
    F = random_cochain(random.Random(seed), l)
    for p in range(1, l):
        assert shuffle_complement(F, p) == shuffle_sum(F, l - p)


def test_fusion_examples():
    m = ModelAlgebra(4)
    parts = fusion_expand(m, 0, Fraction(1, 3), 0, Fraction(2, 5), Fraction(1, 7))
    assert set(parts) == {0} and parts[0] == Poly.constant(1, 1)
    n = 4
    z1, z2, zeta = (Poly.variable(i, n) for i in (1, 2, 3))
    parts = fusion_expand(m, m.basis(1, n), z1, m.basis(0, n), z2, zeta)
    assert parts == {0: z1 - zeta, 1: Poly.constant(1, n)}
    # recombined at zeta, the dependence on zeta disappears
    assert reinsert(m, parts, zeta) == Poly.variable(0, n) + z1


@given(st.integers(0, 4), st.integers(0, 4), st.fractions(-3, 3, max_denominator=5), st.fractions(-3, 3, max_denominator=5))
def test_fusion_degree_and_zeta_independence(a, b, zeta1, zeta2):
    m = ModelAlgebra(4)
    z1, z2 = Fraction(1, 2), Fraction(-2, 3)
    p1 = fusion_expand(m, a, z1, b, z2, zeta1)
    p2 = fusion_expand(m, b, z2, a, z1, zeta2)
    assert max(p1) == a + b
    assert reinsert(m, p1, zeta1) == reinsert(m, p2, zeta2)


def test_fusion_cutoffs():
    m = ModelAlgebra(3)
    with pytest.raises(DomainError):
        fusion_expand(m, 1, 0, 1, 0, 0, cutoff=7)
    with pytest.raises(TruncationError):
        fusion_expand(m, 3, 0, 2, 0, 0, cutoff=4)


def test_coboundary_of_pairing_against_symbolic_oracle():
    # F(g; z) = <dual of t^b, g(t+z)> times the vacuum
    m = ModelAlgebra(3)
    b = 1
    F = ModelCochain(m, 1, {(0, b): 1})
    n = 3
    z1, z2 = Poly.variable(1, n), Poly.variable(2, n)

    def trunc(e):
        e = sp.Poly(sp.expand(e), T)
        return sum(c * T ** k for (k,), c in e.terms() if k <= m.degree)

    def coeff(e, k):
        return sp.Poly(sp.expand(e), T).coeff_monomial(T ** k)

    for a1, a2 in product(range(m.dim), repeat=2):
        x1, x2 = (T + Z1) ** a1, (T + Z2) ** a2
        want = trunc(x1 * coeff(trunc(x2), b)) - coeff(trunc(x1 * x2), b) + trunc(coeff(trunc(x1), b) * x2)
        got = apply_coboundary(F, [(m.basis(a1, n), z1), (m.basis(a2, n), z2)])
        assert sp.expand(poly_to_sympy(got, (T, Z1, Z2)) - want) == 0


def test_cochain_json_roundtrip():
    F = pairing_cochain(ModelAlgebra(3), 2, 2)
    assert Cochain.from_json(F.to_json()) == F
    two = two_point_cochain(ModelAlgebra(2))
    assert Cochain.from_json(two.to_json()) == two
