from __future__ import annotations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from parallax.errors import (NonCommutingParallelisms, NonConstantCoefficients, NotClosed,
                             SingularFrame)
from parallax.expr import Chart, linalg, parse_expr
from parallax.geometry import RationalMap
from parallax.liealg import StructureConstants
from parallax.parallelism import (Frame, coframe, conjugating_map, infer_structure_constants,
                                  maurer_cartan_residual, verify_isogeny_pullback)
from strategies import small_fraction

XY = Chart(("x", "y"))
XYZ = Chart(("x", "y", "z"))
XYZ_AB = Chart(("x", "y", "z"), ("alpha", "beta"))


def frame(chart, rows):
    return Frame(chart, [[parse_expr(c, chart) for c in row] for row in rows])


def affine_frame():
    return frame(XY, [["1", "0"], ["x", "1"]])


def heisenberg_frame():
    return frame(XYZ, [["1", "0", "0"], ["0", "1", "x"], ["0", "0", "1"]])


def md_frame():
    return frame(XYZ_AB, [["1", "alpha*y", "beta*z"], ["0", "1", "0"], ["0", "0", "1"]])


def heisenberg_frame_2():
    # a second realization of the Heisenberg algebra
    return frame(XYZ, [["1", "0", "y"], ["0", "1", "0"], ["0", "0", "1"]])


FRAMES = [affine_frame, heisenberg_frame, md_frame, heisenberg_frame_2]


def test_affine_constants():
    lam = infer_structure_constants(affine_frame())
    assert lam == StructureConstants.from_brackets(2, {(0, 1): {0: 1}})


def test_md_constants():
    lam = infer_structure_constants(md_frame())
    assert lam == StructureConstants.from_brackets(
        3, {(0, 1): {1: "-alpha"}, (0, 2): {2: "-beta"}}, ("alpha", "beta"))


@given(st.sampled_from(FRAMES), st.lists(st.lists(small_fraction, min_size=3, max_size=3),
                                         min_size=3, max_size=3))
def test_constant_basis_change(make, P):
    F = make()
    P = [row[:F.dim] for row in P[:F.dim]]
    assume(linalg.det(P) != 0)
    lam = infer_structure_constants(F)
    assert infer_structure_constants(F.change_basis(P)) == lam.change_basis(P)


@given(st.sampled_from(FRAMES), st.lists(st.lists(small_fraction, min_size=3, max_size=3),
                                         min_size=3, max_size=3))
def test_maurer_cartan_and_round_trip(make, P):
    F = make()
    P = [row[:F.dim] for row in P[:F.dim]]
    assume(linalg.det(P) != 0)
    G = F.change_basis(P)
    omega = coframe(G)
    assert maurer_cartan_residual(omega).is_zero()
    for j, X in enumerate(G.fields):
        e = omega.contract(X)
        assert all((x == 1) if k == j else x.is_zero for k, x in enumerate(e))


def test_affine_coframe_text():
    assert coframe(affine_frame()).describe() == "((1)*A1) dx + ((-x)*A1 + (1)*A2) dy"


def test_wrong_algebra_breaks_maurer_cartan():
    wrong = StructureConstants.from_brackets(2, {(0, 1): {0: -1}})
    res = maurer_cartan_residual(coframe(affine_frame(), wrong))
    assert not res.is_zero() and res.nonzero()


def test_isogeny_identity():
    omega = coframe(md_frame())
    ok, _ = verify_isogeny_pullback(RationalMap.identity(XYZ_AB), omega, omega)
    assert ok


def test_isogeny_square_map():
    U = Chart(("u",))
    X = Chart(("x",))
    theta = coframe(frame(U, [["u"]]))
    source = frame(X, [["x/2"]])
    ok, residual = verify_isogeny_pullback(RationalMap(X, U, ["x^2"]), theta,
                                           coframe(source, theta.algebra))
    assert ok and residual.is_zero()
    ok, residual = verify_isogeny_pullback(RationalMap(X, U, ["x^3"]), theta,
                                           coframe(source, theta.algebra))
    assert not ok and residual.nonzero()


def test_non_constant_coefficients():
    with pytest.raises(NonConstantCoefficients) as info:
        infer_structure_constants(frame(XY, [["1", "0"], ["0", "x"]]))
    assert info.value.witness["index"] == [1, 2, 2]


def test_singular_frame_and_not_closed():
    with pytest.raises(SingularFrame):
        infer_structure_constants(frame(XY, [["1", "0"], ["2", "0"]]))
    with pytest.raises(NotClosed):
        # [d/dx, d/dy + x d/dz] = d/dz leaves the plane field
        infer_structure_constants(frame(XYZ, [["1", "0", "0"], ["0", "1", "x"], ["1", "1", "x"]]))


def test_singular_locus_is_reported():
    F = frame(XY, [["x", "0"], ["0", "1"]])
    assert F.singular_locus() == ["x"]


AB = Chart(("a", "b"))


def test_conjugating_map_of_commuting_pair():
    w = coframe(frame(AB, [["0", "a"], ["a", "0"]]))
    w2 = coframe(frame(AB, [["0", "-1"], ["-a", "-b"]]))
    f = conjugating_map(w, w2)
    assert [[str(x) for x in row] for row in f] == [["1/a", "b/a"], ["0", "1"]]


def test_conjugating_map_abelian():
    w = coframe(Frame.coordinate(XY))
    f = conjugating_map(w, w)
    assert f == [[-1, 0], [0, -1]]


def test_conjugating_map_needs_commuting_frames():
    w = coframe(affine_frame())
    with pytest.raises(NonCommutingParallelisms) as info:
        conjugating_map(w, w)
    assert "pair" in info.value.witness
