import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cosmero.cohomology import (FIXTURE_NERVES, ChainComplex, CoefficientSystem, DoubleComplex, LieAlgebra,
                                Nerve, abelian, ce_complex, cech_complex, coboundary_matrix, heisenberg, sl2)
from cosmero.cohomology.double import apply_matrix
from cosmero.errors import NilpotencyError, UnsupportedOperation, ValidationError
from cosmero.linalg import SparseMatrix
from cosmero.mero_model import ModelAlgebra, ModelCochain

# ---------------------------------------------------------------------------
# generic complexes


def test_zero_differentials_give_space_dims():
    c = ChainComplex({0: 2, 1: 3, 2: 1})
    assert c.cohomology() == {0: 2, 1: 3, 2: 1}


def test_identity_two_term_complex_is_exact():
    c = ChainComplex({0: 1, 1: 1}, {0: SparseMatrix.identity(1)})
    assert c.cohomology() == {0: 0, 1: 0}
    assert c.audit()["euler"] == 0


def test_nilpotency_failure_names_basis_vector():
    d0 = SparseMatrix.from_dense([[1], [0]])
    d1 = SparseMatrix.from_dense([[0, 0], [1, 0]])
    with pytest.raises(NilpotencyError) as err:
        ChainComplex({0: 1, 1: 2, 2: 2}, {0: d0, 1: d1})
    assert err.value.degree == 0 and err.value.column == 0


def test_shape_mismatch_rejected():
    with pytest.raises(ValidationError):
        ChainComplex({0: 2, 1: 2}, {0: SparseMatrix.identity(3)})


def test_complex_json_roundtrip():
    c = cech_complex(Nerve(FIXTURE_NERVES["circle"])).complex
    back = ChainComplex.from_json(c.to_json())
    assert back.cohomology() == c.cohomology() == {0: 1, 1: 1}


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg


@pytest.mark.parametrize("n", range(1, 5))
def test_abelian_homology_is_binomial(n):
    assert ce_complex(abelian(n)).cohomology() == {p: comb(n, p) for p in range(n + 1)}


def test_sl2_and_heisenberg_trivial_coefficients():
    assert ce_complex(sl2()).cohomology() == {0: 1, 1: 0, 2: 0, 3: 1}
    assert ce_complex(heisenberg()).cohomology() == {0: 1, 1: 2, 2: 2, 3: 1}


def test_sl2_differentials_against_sympy_oracle():
    # independent construction of d: Λ^p -> Λ^(p-1), d(x∧y) = -[x,y] etc.
    g = sl2()
    n = 3
    ranks = {}
    for p in (1, 2, 3):
        src = list(combinations(range(n), p))
        tgt = list(combinations(range(n), p - 1))
        m = sp.zeros(len(tgt), len(src))
        for c, w in enumerate(src):
            for a, b in combinations(range(p), 2):
                rest = [w[i] for i in range(p) if i not in (a, b)]
                for k, v in g.bracket(w[a], w[b]).items():
                    if k in rest:
                        continue
                    new = [k] + rest
                    perm = sorted(range(len(new)), key=lambda i: new[i])
                    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
                    m[tgt.index(tuple(sorted(new))), c] += (-1) ** (a + b + inv) * sp.Rational(v.numerator, v.denominator)
        ranks[p] = m.rank()
    dims = {p: comb(n, p) for p in range(n + 1)}
    want = {p: dims[p] - ranks.get(p, 0) - ranks.get(p + 1, 0) for p in range(n + 1)}
    assert ce_complex(g).cohomology() == want


def test_jacobi_failure_rejected():
    with pytest.raises(ValidationError, match="Jacobi"):
        LieAlgebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})


def test_module_must_respect_bracket():
    bad = [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 0]]]
    with pytest.raises(ValidationError):
        LieAlgebra(3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}}, module=(2, bad))


def test_sl2_adjoint_module_is_acyclic():
    g = sl2()
    mats = []
    for i in range(3):
        mats.append([[g.structure_constant(i, j, k) for j in range(3)] for k in range(3)])
    adj = LieAlgebra(3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}}, module=(3, mats))
    assert set(ce_complex(adj).cohomology().values()) == {0}


def test_one_dimensional_koszul_window():
    c = ce_complex(abelian(1), pbw_cutoff=3)
    assert c.dims == {0: 4, 1: 3}
    assert c.cohomology() == {0: 1, 1: 0}


@pytest.mark.parametrize("g", [abelian(2), heisenberg(), sl2()], ids=["abelian", "heisenberg", "sl2"])
@pytest.mark.parametrize("cutoff", [1, 2, 3])
def test_pbw_windows_nilpotent(g, cutoff):
    c = ce_complex(g, pbw_cutoff=cutoff)
    assert not c.open_degrees
    audit = c.audit()
    # the total-degree window is a truncation of a free resolution of Q
    assert audit["cohomology"][0] == 1
    assert all(v == 0 for n, v in audit["cohomology"].items() if n)


def test_pbw_window_marks_open_degrees():
    c = ce_complex(sl2(), pbw_cutoff=2, window="pbw")
    assert c.open_degrees == {1, 2, 3}
    assert c.audit()["euler"] is None


def test_lie_json_roundtrip():
    g = heisenberg()
    assert LieAlgebra.from_json(g.to_json()).to_json() == g.to_json()


# ---------------------------------------------------------------------------
# Čech


EXPECTED = {
    "circle": {0: 1, 1: 1},
    "simplex2": {0: 1, 1: 0, 2: 0},
    "sphere2": {0: 1, 1: 0, 2: 1},
    "two_points": {0: 2},
    "two_triangles": {0: 1, 1: 0, 2: 0},
}


@pytest.mark.parametrize("name", sorted(FIXTURE_NERVES))
@pytest.mark.parametrize("convention", ["chains", "simplicial"])
def test_fixture_nerves(name, convention):
    c = cech_complex(Nerve(FIXTURE_NERVES[name]), convention=convention)
    diffs = c.complex.differentials
    assert c.complex.verify_nilpotency() == sorted(n for n in diffs if n + 1 in diffs)
    for n in diffs:
        if n + 1 in diffs:
            assert (diffs[n + 1] @ diffs[n]).is_zero()
    assert c.cohomology() == EXPECTED[name]


def test_nerve_is_downward_closed():
    n = Nerve([[0, 1, 2]])
    assert (0, 2) in n and (1,) in n
    assert n.facets == [(0, 1, 2)]
    assert len(n.simplices()) == 7


def test_single_open_set():
    n = Nerve([[0]])
    c = CoefficientSystem(n, {(0,): 3}, {})
    assert cech_complex(n, c).cohomology() == {0: 3}


def _random_functorial(nerve, dim, rng):
    # F(s) = Q^dim, restriction t -> s is M_s M_t^-1: functorial by construction
    mats = {}
    for s in nerve.simplices():
        while True:
            m = sp.Matrix(dim, dim, lambda i, j: rng.randint(-2, 2))
            if m.det() != 0:
                break
        mats[s] = m
    maps = {}
    for s in nerve.simplices():
        for f in nerve.faces(s):
            r = mats[s] * mats[f].inv()
            maps[(f, s)] = [[Fraction(int(sp.fraction(r[i, j])[0]), int(sp.fraction(r[i, j])[1]))
                             for j in range(dim)] for i in range(dim)]
    return CoefficientSystem(nerve, {s: dim for s in nerve.simplices()}, maps)


@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(FIXTURE_NERVES)))
def test_conventions_agree_on_functorial_coefficients(seed, name):
    nerve = Nerve(FIXTURE_NERVES[name])
    coeffs = _random_functorial(nerve, 2, random.Random(seed))
    a = cech_complex(nerve, coeffs, "chains").cohomology()
    b = cech_complex(nerve, coeffs, "simplicial").cohomology()
    assert {k: v for k, v in a.items() if v} == {k: v for k, v in b.items() if v}


def test_non_functorial_restrictions_rejected():
    nerve = Nerve([[0, 1, 2]])
    maps = {(f, s): [[1]] for s in nerve.simplices() for f in nerve.faces(s)}
    maps[((0,), (0, 1))] = [[2]]
    with pytest.raises(ValidationError, match="triangle"):
        CoefficientSystem(nerve, {s: 1 for s in nerve.simplices()}, maps)


def dual_numbers(nerve):
    # Q[x]/(x^2) on every simplex, identity restrictions
    mult = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    dims = {s: 2 for s in nerve.simplices()}
    maps = {(f, s): [[1, 0], [0, 1]] for s in nerve.simplices() for f in nerve.faces(s)}
    return CoefficientSystem(nerve, dims, maps, {s: (mult, [1, 0]) for s in nerve.simplices()})


def random_cochain(c, k, rng):
    return {cell: [Fraction(rng.randint(-3, 3)) for _ in range(c.coeffs.dims[cell[0]])]
            for cell in c.cells[k]}


def combine(c, n, *terms):
    out = {}
    for sign, co in terms:
        for cell, v in co.items():
            acc = out.setdefault(cell, [Fraction(0)] * len(v))
            for i, x in enumerate(v):
                acc[i] += sign * x
    return {cell: v for cell, v in out.items()}


def same(c, n, a, b):
    return c.to_vector(n, a) == c.to_vector(n, b)


@pytest.mark.parametrize("convention", ["chains", "simplicial"])
def test_leibniz_rules_on_random_pairs(convention):
    rng = random.Random(11)
    nerve = Nerve(FIXTURE_NERVES["sphere2"])
    c = cech_complex(nerve, dual_numbers(nerve), convention)
    top = max(c.cells)
    pairs = 0
    while pairs < 50:
        k, kk = rng.randint(0, 1), rng.randint(0, 1)
        if k + kk + 1 > top:
            continue
        a, b = random_cochain(c, k, rng), random_cochain(c, kk, rng)
        n = k + kk + 1
        # plain product: the usual graded Leibniz rule
        lhs = c.delta(k + kk, c.cup(a, k, b, kk, signed=False))
        rhs = combine(c, n, (1, c.cup(c.delta(k, a), k + 1, b, kk, signed=False)),
                      ((-1) ** k, c.cup(a, k, c.delta(kk, b), kk + 1, signed=False)))
        assert same(c, n, lhs, rhs)
        # with the (-1)^(k k') sign the rule becomes (-1)^k' δa·b + a·δb
        lhs = c.delta(k + kk, c.cup(a, k, b, kk))
        rhs = combine(c, n, ((-1) ** kk, c.cup(c.delta(k, a), k + 1, b, kk)),
                      (1, c.cup(a, k, c.delta(kk, b), kk + 1)))
        assert same(c, n, lhs, rhs)
        pairs += 1


def test_cup_unit_and_degree_zero_product():
    nerve = Nerve(FIXTURE_NERVES["circle"])
    c = cech_complex(nerve, dual_numbers(nerve))
    rng = random.Random(3)
    a1 = random_cochain(c, 1, rng)
    unit = c.unit_cochain()
    assert same(c, 1, c.cup(a1, 1, unit, 0), a1)
    assert same(c, 1, c.cup(unit, 0, a1, 1), a1)
    a0, b0 = random_cochain(c, 0, rng), random_cochain(c, 0, rng)
    prod = c.cup(a0, 0, b0, 0)
    for cell in c.cells[0]:
        assert prod[cell] == c.coeffs.multiply(cell[0], a0[cell], b0[cell])


def test_degree_one_product_sign_and_associativity():
    nerve = Nerve(FIXTURE_NERVES["sphere2"])
    c = cech_complex(nerve, convention="simplicial")
    rng = random.Random(8)
    a, b = random_cochain(c, 1, rng), random_cochain(c, 1, rng)
    signed, plain = c.cup(a, 1, b, 1), c.cup(a, 1, b, 1, signed=False)
    for cell in c.cells[2]:
        s = cell[0]
        # brute force on the simplex: a(v0 v1) * b(v1 v2)
        want = a[((s[0], s[1]),)][0] * b[((s[1], s[2]),)][0]
        assert plain[cell][0] == want
        assert signed[cell][0] == -want
    x, y = (random_cochain(c, 0, rng) for _ in range(2))
    left = c.cup(c.cup(x, 0, a, 1), 1, y, 0)
    right = c.cup(x, 0, c.cup(a, 1, y, 0), 1)
    assert same(c, 1, left, right)


def test_cup_needs_algebra():
    nerve = Nerve([[0, 1]])
    coeffs = CoefficientSystem(nerve, {s: 2 for s in nerve.simplices()},
                               {(f, s): [[1, 0], [0, 1]] for s in nerve.simplices() for f in nerve.faces(s)})
    c = cech_complex(nerve, coeffs)
    with pytest.raises(UnsupportedOperation):
        c.cup({}, 0, {}, 0)


# ---------------------------------------------------------------------------
# double complex


def test_d2_small():
    dc = DoubleComplex(ModelAlgebra(3), 1, 2)
    out = dc.d2check()
    assert out["nilpotent"] and out["checked_cells"] == [[0, 2], [1, 2]]


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_double_complex_cohomology_matches_hochschild(degree):
    # HH^*(Q[t]/(t^N)) has dimensions N, N-1, N-1, ... over Q
    dc = DoubleComplex(ModelAlgebra(degree), 2, 2)
    n = degree + 1
    h = dc.cohomology()
    assert [h[(l, 0)] for l in range(3)] == [n, n - 1, n - 1]
    assert h[(1, 0)] == h[(1, 1)]


def test_zeta_independence_and_image_closure():
    m = ModelAlgebra(3)
    dc = DoubleComplex(m, 1, 2)
    for l in (0, 1, 2):
        other = tuple(Fraction(-7 + 3 * i, 5) for i in range(l))
        assert dc.zeta_independent(l, other)
    rng = random.Random(2)
    F = ModelCochain(m, 1, {(rng.randrange(4), rng.randrange(4)): rng.randint(-3, 3) for _ in range(5)})
    assert dc.image_closure_failures(F, trials=4) == []


def test_zero_cochain_has_zero_image():
    m = ModelAlgebra(2)
    assert apply_matrix(coboundary_matrix(m, 1), ModelCochain(m, 1)).coeffs == {}


class _BrokenModel(ModelAlgebra):
    def apply_t(self, g):
        return g.derivative(0) * 2


def test_model_failing_axioms_rejected():
    with pytest.raises(ValidationError, match="axiom"):
        DoubleComplex(_BrokenModel(2), 1, 2)
