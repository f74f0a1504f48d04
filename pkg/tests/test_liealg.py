from __future__ import annotations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from parallax.errors import NonCommutingAction, NotADerivation, SingularMatrix
from parallax.expr import linalg
from parallax.liealg import (StructureConstants, adjoint_rep, center, check_lie_algebra,
                             derived_subalgebra, is_automorphism, semidirect_sum, sl2)
from strategies import small_fraction


def heisenberg():
    return StructureConstants.from_brackets(3, {(0, 1): {2: 1}})


def affine_line():
    return StructureConstants.from_brackets(2, {(0, 1): {0: 1}})


NAMED = [sl2, heisenberg, affine_line, lambda: StructureConstants.abelian(3)]

matrices3 = st.lists(st.lists(small_fraction, min_size=3, max_size=3), min_size=3, max_size=3)
matrices2 = st.lists(st.lists(small_fraction, min_size=2, max_size=2), min_size=2, max_size=2)


def _invertible(P):
    return linalg.det(P) != 0


@given(st.sampled_from([sl2, heisenberg]), matrices3)
def test_jacobi_survives_basis_change(make, P):
    assume(_invertible(P))
    lam = make().change_basis(P)
    assert check_lie_algebra(lam).ok


@given(matrices2)
def test_semidirect_with_one_generator_is_lie(D):
    # any endomorphism of an abelian algebra is a derivation
    g = semidirect_sum(1, StructureConstants.abelian(2), [D])
    assert check_lie_algebra(g).ok
    assert g.dim == 3


@given(matrices2, st.lists(small_fraction, min_size=2, max_size=2))
def test_semidirect_two_commuting_generators(D, coeffs):
    # a polynomial in D commutes with D
    D2 = linalg.matmul(D, D)
    E = [[coeffs[0] * D2[i][j] + coeffs[1] * D[i][j] for j in range(2)] for i in range(2)]
    g = semidirect_sum(2, StructureConstants.abelian(2), [D, E])
    assert check_lie_algebra(g).ok


@given(st.sampled_from(NAMED), matrices3)
def test_center_is_central_and_basis_invariant(make, P):
    lam = make()
    P = [row[:lam.dim] for row in P[:lam.dim]]
    assume(_invertible(P))
    Z = center(lam)
    for v in Z:
        for j in range(lam.dim):
            assert not any(lam.bracket(v, lam.basis_vector(j)))
    assert len(center(lam.change_basis(P))) == len(Z)


@given(st.sampled_from([sl2, heisenberg]), matrices3)
def test_derived_dimension_is_basis_invariant(make, P):
    assume(_invertible(P))
    lam = make()
    assert derived_subalgebra(lam.change_basis(P))[1] == derived_subalgebra(lam)[1]


def test_named_invariants():
    assert len(center(sl2())) == 0
    assert len(center(heisenberg())) == 1
    assert len(center(StructureConstants.abelian(3))) == 3
    assert derived_subalgebra(sl2())[1] == 0
    assert derived_subalgebra(heisenberg())[1] == 2


@given(st.integers(-4, 4).filter(bool))
def test_scaling_automorphism_of_affine_line(t):
    # A1 -> A1, A2 -> A2 + t A1 preserves [A1,A2] = A1
    ok, _ = is_automorphism(affine_line(), [[1, t], [0, 1]])
    assert ok


def test_non_automorphism_witness():
    ok, pair = is_automorphism(affine_line(), [[1, 0], [0, 2]])
    assert not ok and pair == (0, 1)


def test_singular_automorphism():
    with pytest.raises(SingularMatrix):
        is_automorphism(affine_line(), [[1, 1], [1, 1]])


def test_adjoint_is_a_representation():
    lam = sl2()
    ad = adjoint_rep(lam)
    for i in range(3):
        for j in range(3):
            comm = [[a - b for a, b in zip(r1, r2)] for r1, r2 in
                    zip(linalg.matmul(ad[i], ad[j]), linalg.matmul(ad[j], ad[i]))]
            rhs = [[sum((lam.lam[i][j][k] * ad[k][p][q] for k in range(3)), lam.chart.zero)
                    for q in range(3)] for p in range(3)]
            assert comm == rhs


def test_broken_jacobi_is_reported():
    bad = StructureConstants.from_brackets(3, {(0, 1): {0: 1}, (1, 2): {1: 1}, (0, 2): {2: 1}})
    rep = check_lie_algebra(bad)
    assert not rep.ok and rep.jacobi


def test_not_a_derivation():
    with pytest.raises(NotADerivation):
        # D H3 = H1 while D[H1,H2] must equal [D H1, H2] + [H1, D H2] = 0
        semidirect_sum(1, heisenberg(), [[[0, 0, 1], [0, 0, 0], [0, 0, 0]]])


def test_non_commuting_action():
    with pytest.raises(NonCommutingAction):
        semidirect_sum(2, StructureConstants.abelian(2), [[[0, 1], [0, 0]], [[0, 0], [1, 0]]])


def test_json_round_trip_with_parameters():
    lam = StructureConstants.from_brackets(3, {(0, 1): {1: "-alpha"}, (0, 2): {2: "-beta"}},
                                           ("alpha", "beta"))
    assert StructureConstants.from_json(lam.to_json()) == lam
