from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parallax.errors import ChartMismatch, IndeterminatePullback
from parallax.expr import Chart, parse_expr
from parallax.geometry import (GValuedForm, RationalMap, VectorField, exterior_derivative,
                               lie_bracket, pullback)
from strategies import XY, polynomials, rationals

UV = Chart(("u", "v"))
ST = Chart(("s", "t"))


def exact_form(f):
    return GValuedForm(f.chart, None, 1, [[f.derive(v) for v in f.chart.variables]])


@given(rationals())
def test_d_of_d_is_zero(f):
    assert exterior_derivative(exact_form(f)).is_zero()


@given(st.lists(rationals(), min_size=2, max_size=2), rationals())
def test_d_is_linear_over_constants(row, g):
    w = GValuedForm(XY, None, 1, [row])
    dg = exact_form(g)
    total = GValuedForm(XY, None, 1, [[a + 3 * b for a, b in zip(row, dg.coeffs[0])]])
    assert exterior_derivative(total).coeffs == exterior_derivative(w).coeffs


def maps(source, target):
    return st.lists(polynomials(source, max_terms=3, max_degree=1), min_size=target.dim,
                    max_size=target.dim).map(lambda cs: RationalMap(source, target, cs))


@given(maps(ST, UV), maps(UV, XY), st.lists(polynomials(XY), min_size=2, max_size=2))
def test_pullback_is_functorial(F, G, row):
    omega = GValuedForm(XY, None, 1, [row])
    assert pullback(G.compose(F), omega).coeffs == pullback(F, pullback(G, omega)).coeffs


@given(polynomials(XY), maps(UV, XY))
def test_pullback_commutes_with_d_on_functions(f, F):
    # F*(df) = d(f o F)
    assert pullback(F, exact_form(f)).coeffs == exact_form(F.pull(f)).coeffs


@given(st.lists(rationals(), min_size=2, max_size=2))
def test_identity_pullback(row):
    omega = GValuedForm(XY, None, 1, [row])
    assert pullback(RationalMap.identity(XY), omega).coeffs == omega.coeffs


fields = st.lists(polynomials(XY, max_terms=3), min_size=2, max_size=2).map(lambda c: VectorField(XY, c))


@given(fields, fields, fields)
def test_bracket_jacobi(X, Y, Z):
    total = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + \
        lie_bracket(Z, lie_bracket(X, Y))
    assert total.is_zero()


@given(fields, fields, rationals())
def test_bracket_is_a_derivation(X, Y, f):
    assert lie_bracket(X, Y)(f) == X(Y(f)) - Y(X(f))


def test_two_form_must_be_antisymmetric():
    with pytest.raises(ValueError):
        GValuedForm(XY, None, 2, [[[0, 1], [1, 0]]])


def test_pullback_chart_mismatch():
    omega = GValuedForm(UV, None, 1, [[1, 0]])
    with pytest.raises(ChartMismatch):
        pullback(RationalMap(ST, XY, ["s", "t"]), omega)


def test_indeterminate_pullback():
    omega = GValuedForm(XY, None, 1, [[parse_expr("1/(x-y)", XY), 0]])
    F = RationalMap(ST, XY, ["s", "s"])
    with pytest.raises(IndeterminatePullback):
        pullback(F, omega)
