from __future__ import annotations

import pytest
from hypothesis import given

from parallax import manifest
from parallax.connection import (FrameConnection, adjoint_connection, associated_connection,
                                 change_frame, lie_connection_report, opposite_initial_brackets,
                                 reciprocal, to_coordinates, torsion, verify_horizontal)
from parallax.corpus import get_example
from parallax.errors import InitialConditionMismatch
from parallax.expr import Chart
from parallax.geometry import VectorField
from parallax.parallelism import Frame
from strategies import connections


def problem(name):
    return manifest.load(get_example(name))


def christoffels(C):
    return {(i + 1, j + 1, k + 1): str(v) for (i, j, k), v in C.nonzero().items()}


@given(connections())
def test_flat_constant_torsion_iff_reciprocal_flat(C):
    rep = lie_connection_report(C)
    assert rep.equivalence_holds, rep.to_json()


@given(connections())
def test_reciprocal_is_an_involution(C):
    assert reciprocal(reciprocal(C)).gamma == C.gamma


@given(connections())
def test_reciprocal_flips_torsion(C):
    T = torsion(C)
    Tr = torsion(reciprocal(C))
    assert all(a == -b for x, y in zip(T, Tr) for u, v in zip(x, y) for a, b in zip(u, v))


@given(connections(family="associated"))
def test_frame_change_round_trip(C):
    G = Frame(C.chart, [[C.chart.one if a == b else C.chart.zero for a in range(C.dim)]
                        for b in range(C.dim)])
    assert change_frame(C, G).gamma == C.gamma


def test_broken_connection_is_rejected_with_witness():
    chart = Chart(("x", "y"))
    g = [[[chart.zero] * 2 for _ in range(2)] for _ in range(2)]
    g[0][1][0] = chart.symbol("y")
    rep = lie_connection_report(FrameConnection(Frame.coordinate(chart), g))
    assert not rep.is_lie_connection
    assert not rep.flat
    assert rep.witnesses["curvature"]["value"] != "0"
    assert rep.equivalence_holds


def test_affine_reciprocal_in_coordinates():
    F = problem("ex-B").frame()
    R = to_coordinates(reciprocal(associated_connection(F)))
    assert christoffels(R) == {(2, 1, 1): "-1"}


def test_md_reciprocal_in_coordinates():
    F = problem("ex-MD").frame()
    R = to_coordinates(reciprocal(associated_connection(F)))
    assert christoffels(R) == {(1, 2, 2): "-alpha", (1, 3, 3): "-beta"}


def test_md_log_reciprocal_in_coordinates():
    F = problem("ex-MD-log").frame()
    R = to_coordinates(reciprocal(associated_connection(F)))
    assert christoffels(R) == {(1, 1, 1): "-1/x", (1, 2, 2): "-alpha/x", (1, 3, 3): "-beta/x"}


@pytest.mark.parametrize("name", ["ex-B", "ex-MD", "ex-MD-log"])
def test_tower_fields_are_horizontal(name):
    P = problem(name)
    R = reciprocal(associated_connection(P.frame()))
    for Y in P.horizontal():
        rep = verify_horizontal(R, Y)
        assert rep.ok and not any(x for row in rep.bracket_residuals for x in row)


def test_non_horizontal_field_has_residual():
    P = problem("ex-B")
    R = reciprocal(associated_connection(P.frame()))
    # d/dx does not commute with x d/dx + d/dy, so it is not horizontal
    rep = verify_horizontal(R, VectorField(P.frame().chart, ["1", "0"]))
    assert not rep.ok
    assert [str(x) for x in rep.residuals[1]] == ["-1", "0"]


@pytest.mark.parametrize("name", ["ex-B", "ex-MD", "ex-MD-log"])
def test_opposite_brackets(name):
    P = problem(name)
    rep = opposite_initial_brackets(P.frame(), P.horizontal(), P.values("point"),
                                    P.values("tower_values"))
    assert rep.ok


def test_initial_condition_mismatch():
    P = problem("ex-B")
    with pytest.raises(InitialConditionMismatch):
        opposite_initial_brackets(P.frame(), P.horizontal(), P.values("point"), {"t": 2})


@pytest.mark.parametrize("name", ["ex-B", "ex-MD", "ex-MD-log"])
def test_reciprocal_frame_christoffels_are_adjoint(name):
    F = problem(name).frame()
    R = reciprocal(associated_connection(F))
    from parallax.parallelism import infer_structure_constants

    A = adjoint_connection(infer_structure_constants(F), F)
    r = F.dim
    for i in range(r):
        for j in range(r):
            for k in range(r):
                assert R.gamma[i][j][k] == A.gamma[i][j][k].lift(R.chart)
