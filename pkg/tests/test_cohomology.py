from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import A4_ENTRIES, cayley_rotation, random_cochain
from threelie import (DegreeOverflowGuard, LinearMap, MorphismComplex, MorphismLInfinity,
                      NotAMorphism, NotASubalgebra, RepresentationComplex, Subspace, abelian,
                      adjoint_rep, cohomology_report, delta0, delta_n, direct_sum,
                      graph_correspondence, induced_quotient_rep, make_algebra, partial_rep_n,
                      pullback,
                      quotient_split, rigidity, stability, subalgebra_stability, tilde_partial)
from threelie.cohomology import (INCONCLUSIVE, RIGID, STABLE, c0_vector, cohomology_table,
                                 delta0_matrix, delta_twisted, pullback_matrix)
from threelie.exact import SparseMatrix
from threelie.nr import GCochain, algebra_cochain, map_cochain

seeds = st.integers(0, 10 ** 6)
I4 = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]


@pytest.fixture(scope="module")
def idcx(A4):
    return MorphismComplex(LinearMap.identity(4), A4, A4)


def dense_rows(M: SparseMatrix):
    return [list(r) for r in M.to_dense()]


def test_dimensions_and_shapes(idcx):
    assert [idcx.dim(n) for n in range(4)] == [12, 16, 96, 576]
    assert idcx.differential(0).shape == (16, 12)
    assert idcx.differential(1).shape == (96, 16)
    assert idcx.differential(2).shape == (576, 96)
    assert idcx.rank(0) == 6
    assert idcx.rank(-1) == 0


def test_differentials_match_the_vector_oracle(idcx):
    T = oracles.tensor(4, A4_ENTRIES)
    act = oracles.morphism_action(T, I4)
    for n in (1, 2):
        assert dense_rows(idcx.differential(n)) == oracles.coboundary_matrix(T, act, 4, n)


def test_representation_differentials_match_the_vector_oracle(A4, span12):
    T = oracles.tensor(4, A4_ENTRIES)
    cx = RepresentationComplex(adjoint_rep(A4))
    assert dense_rows(cx.differential(1)) == oracles.coboundary_matrix(
        T, oracles.adjoint_action(T), 4, 1)
    # H = span{e1, e2} is abelian; the action on g/H = span{[e3], [e4]} is p pi(u, v, s .)
    TH = oracles.tensor(2, [])

    def act(u, v):
        uu, vv = u + [0, 0], v + [0, 0]
        cols = [oracles.bracket(T, uu, vv, oracles.unit(2 + c, 4))[2:] for c in range(2)]
        return [[cols[c][r] for c in range(2)] for r in range(2)]
    qcx = RepresentationComplex(induced_quotient_rep(A4, span12))
    for n in (1, 2):
        assert dense_rows(qcx.differential(n)) == oracles.coboundary_matrix(TH, act, 2, n)


def test_complexes_square_to_zero(A4, ab2, span12, idcx):
    assert (idcx.differential(1) @ idcx.differential(0)).is_zero()
    assert (idcx.differential(2) @ idcx.differential(1)).is_zero()
    zcx = MorphismComplex(LinearMap.zero(2, 2), ab2, ab2)
    assert (zcx.differential(1) @ zcx.differential(0)).is_zero()
    for rho in (adjoint_rep(A4), induced_quotient_rep(A4, span12)):
        cx = RepresentationComplex(rho)
        assert (cx.differential(2) @ cx.differential(1)).is_zero()


@settings(max_examples=3, deadline=None)
@given(seeds)
def test_rotation_complex_squares_to_zero(seed):
    rng = random.Random(seed)
    A4 = make_algebra(4, A4_ENTRIES)
    cx = MorphismComplex(LinearMap(4, 4, cayley_rotation(rng, 4)), A4, A4)
    assert (cx.differential(1) @ cx.differential(0)).is_zero()
    assert (cx.differential(2) @ cx.differential(1)).is_zero()


def test_first_cohomology_of_identity(A4, idcx):
    T = oracles.tensor(4, A4_ENTRIES)
    rep = cohomology_report(idcx, 1)
    assert rep.dimZ == oracles.derivation_dim(T) == 6
    assert rep.dimB == oracles.inner_derivation_rank(T) == 6
    assert rep.dimH == 0
    assert cohomology_report(idcx, 0).dimZ == 6


def test_second_cohomology_of_identity(idcx):
    T = oracles.tensor(4, A4_ENTRIES)
    dims = oracles.cohomology_dims(T, oracles.morphism_action(T, I4), 4, 2)
    rep = cohomology_report(idcx, 2)
    assert (rep.dimZ, rep.dimB) == dims[2] == (11, 10)
    assert rep.dimH == 1


def test_verdicts(A4, ab2, span12):
    f = LinearMap.identity(4)
    r = rigidity(f, A4, A4)
    assert r.verdict == RIGID and r.to_json()["dimH"] == 0
    s = stability(f, A4, A4)
    assert s.verdict == INCONCLUSIVE and s.dimH == 1 and s.extra["dimZ1"] == 6
    sub = subalgebra_stability(A4, span12)
    assert sub.verdict == STABLE and sub.dimH == 0 and sub.extra["dimZ1"] == 4
    assert rigidity(LinearMap.zero(2, 2), ab2, ab2).verdict == INCONCLUSIVE


def test_subalgebra_second_cohomology_against_oracle(A4, span12):
    T = oracles.tensor(4, A4_ENTRIES)

    def act(u, v):
        uu, vv = u + [0, 0], v + [0, 0]
        cols = [oracles.bracket(T, uu, vv, oracles.unit(2 + c, 4))[2:] for c in range(2)]
        return [[cols[c][r] for c in range(2)] for r in range(2)]
    dims = oracles.cohomology_dims(oracles.tensor(2, []), act, 2, 2)
    rep = subalgebra_stability(A4, span12)
    assert (rep.dimZ, rep.dimB) == dims[2] == (0, 0)
    assert rep.extra["dimZ1"] == dims[1][0] == 4


def test_abelian_first_cohomology(ab2):
    cx = MorphismComplex(LinearMap.zero(2, 2), ab2, ab2)
    assert cohomology_report(cx, 1).dimH == 4
    table = cohomology_table(cx, 2)
    assert [r.degree for r in table] == [0, 1, 2]
    assert table[0].dimZ == 2


def test_delta0_examples(A4):
    f = LinearMap.identity(4)
    c = delta0({(0, 1): 1}, {}, f, A4, A4)
    assert c.entry((2,)) == {3: -1} and c.entry((3,)) == {2: 1}
    assert c.entry((0,)) == {}
    # for f = id the inner derivations of X and U cancel
    assert delta0([(0, 1, 1)], [(0, 1, 1)], f, A4, A4).is_zero()
    D = delta0_matrix(f, A4, A4)
    assert D.apply(c0_vector({0: 1}, {}, 4, 4)) == c.to_vector()
    assert delta0({}, {(2, 3): 1}, LinearMap.zero(4, 4), A4, A4).is_zero()


def test_delta1_of_identity_is_twice_the_bracket(A4):
    f = LinearMap.identity(4)
    ident = map_cochain(f)
    got = delta_n(ident, f, A4, A4)
    pi = algebra_cochain(A4)
    assert got == GCochain(1, 4, 4, pi.table, kind="h").scaled(2)
    assert partial_rep_n(map_cochain(f), adjoint_rep(A4)) == got


def test_not_a_morphism(A4):
    with pytest.raises(NotAMorphism) as info:
        MorphismComplex(LinearMap.diagonal([2, 1, 1, 1]), A4, A4)
    assert info.value.witness == {"triple": [0, 1, 2], "defect": [0, 0, 0, 1]}


def test_degree_guard(idcx):
    with pytest.raises(DegreeOverflowGuard):
        idcx.differential(5)
    with pytest.raises(ValueError):
        cohomology_report(RepresentationComplex(adjoint_rep(abelian(3))), 0)


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_matrix_columns_agree_with_apply(seed):
    A4 = make_algebra(4, A4_ENTRIES)
    rng = random.Random(seed)
    cx = MorphismComplex(LinearMap.identity(4), A4, A4)
    theta = random_cochain(rng, 1, 4, 4, density=0.2)
    assert cx.differential(2).apply(theta.to_vector()) == cx.apply(2, theta).to_vector()
    again = MorphismComplex(LinearMap.identity(4), A4, A4).differential(2)
    assert again == cx.differential(2)
    assert again.to_dense() == cx.differential(2).to_dense()


@settings(max_examples=3, deadline=None)
@given(seeds)
def test_twisted_route_matches_explicit(seed):
    A4 = make_algebra(4, A4_ENTRIES)
    rng = random.Random(seed)
    f = LinearMap(4, 4, cayley_rotation(rng, 4))
    L = MorphismLInfinity(A4, A4)
    for degree in (0, 1):
        theta = random_cochain(rng, degree, 4, 4, density=0.15)
        assert delta_twisted(theta, f, L) == delta_n(theta, f, A4, A4)


def test_pullback_is_a_chain_map_for_a_rotation(A4, rng):
    f = LinearMap(4, 4, cayley_rotation(rng, 4))
    mcx = MorphismComplex(f, A4, A4)
    rcx = RepresentationComplex(adjoint_rep(A4))
    F1, F2 = pullback_matrix(f, 1), pullback_matrix(f, 2)
    assert mcx.differential(1) @ F1 == F2 @ rcx.differential(1)


def test_pullback_by_identity_is_identity(A4, rng):
    theta = random_cochain(rng, 1, 4, 4, kind="g", density=0.2)
    got = pullback(theta, LinearMap.identity(4))
    assert got.to_vector() == theta.to_vector()
    assert pullback(theta, LinearMap.zero(4, 4)).is_zero()


@pytest.mark.parametrize("complement", [None, [[1, 0, 1, 0], [0, 1, 0, 1]],
                                        [[0, 3, 1, 2], [5, 0, 1, 1]]])
def test_tilde_partial_matches_the_induced_coboundary(A4, span12, rng, complement):
    split = quotient_split(A4, span12, complement)
    rho = induced_quotient_rep(A4, span12, split)
    for _ in range(4):
        alpha = random_cochain(rng, 1, 2, 2, density=0.8)
        assert tilde_partial(alpha, A4, span12, split) == partial_rep_n(alpha, rho)


def test_tilde_partial_on_graph(A4, rng):
    G = direct_sum(A4, A4)
    H = Subspace(G, [{i: 1, 4 + i: 1} for i in range(4)])
    rho = induced_quotient_rep(G, H)
    alpha = random_cochain(rng, 1, 4, 4, density=0.2)
    assert tilde_partial(alpha, G, H) == partial_rep_n(alpha, rho)


def test_tilde_partial_needs_a_subalgebra(A4):
    H = Subspace(A4, [{0: 1}, {1: 1}, {2: 1}])
    with pytest.raises(NotASubalgebra):
        tilde_partial(GCochain.zero(1, 3, 1, kind="h"), A4, H)


def test_graph_correspondence_degree_two(A4):
    gc = graph_correspondence(LinearMap.identity(4), A4, A4, 2)
    assert gc.morphism.dimH == gc.graph.dimH == 1
    assert gc.dimensions_agree
    assert all(gc.bijective.values()) and all(gc.intertwines.values())
    assert gc.to_json()["xi_bijective"] == {"1": True, "2": True, "3": True}


def test_graph_correspondence_abelian(ab2):
    gc = graph_correspondence(LinearMap.zero(2, 2), ab2, ab2, 1)
    assert gc.morphism.dimH == gc.graph.dimH == 4
    assert all(gc.intertwines.values())


def test_graph_correspondence_rejects_degree_zero(A4):
    with pytest.raises(ValueError):
        graph_correspondence(LinearMap.identity(4), A4, A4, 0)


def test_graph_side_first_cohomology_against_oracle(A4):
    """For f = id the graph complex in degree 1 is C^1(A4, ad) with nothing below it."""
    T = oracles.tensor(4, A4_ENTRIES)
    dims = oracles.cohomology_dims(T, oracles.adjoint_action(T), 4, 1)
    gc = graph_correspondence(LinearMap.identity(4), A4, A4, 1)
    assert (gc.graph.dimZ, gc.graph.dimB) == dims[1] == (6, 0)
    # the morphism side has C^0(f) and hence six coboundaries in degree 1
    assert (gc.morphism.dimZ, gc.morphism.dimB) == (6, 6)
    assert all(gc.bijective.values()) and all(gc.intertwines.values())
