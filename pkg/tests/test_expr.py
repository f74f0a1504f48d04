from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parallax.errors import (DivisionByZeroPolynomial, ExprSyntaxError, NameClash, NonIntegrable,
                             TowerInsufficient, UnknownSymbol)
from parallax.expr import Chart, compose, derive, parse_expr, to_text
from strategies import XY, nonzero_polynomials, polynomials, rationals


# -- ring / field axioms ---------------------------------------------------------------------

@given(rationals(), rationals(), rationals())
def test_field_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == XY.zero
    assert f * XY.one == f


@given(rationals(), nonzero_polynomials())
def test_division_inverts_multiplication(f, g):
    assert (f * g) / g == f
    assert (f / g) * g == f


def test_division_by_zero():
    with pytest.raises(DivisionByZeroPolynomial):
        XY.symbol("x") / XY.zero


# -- derivations -------------------------------------------------------------------------------

@given(rationals(), rationals(), st.sampled_from(["x", "y"]))
def test_leibniz_rule(f, g, v):
    assert derive(f * g, v) == derive(f, v) * g + f * derive(g, v)
    assert derive(f + g, v) == derive(f, v) + derive(g, v)


@given(rationals(), nonzero_polynomials(), st.sampled_from(["x", "y"]))
def test_quotient_rule(f, g, v):
    assert derive(f / g, v) == (derive(f, v) * g - f * derive(g, v)) / (g * g)


@given(polynomials(), polynomials(), polynomials())
def test_chain_rule(f, u, w):
    # d/dx f(u(x,y), w(x,y)) = f_x(u,w) u_x + f_y(u,w) w_x
    sub = {"x": u, "y": w}
    lhs = derive(compose(f, sub, XY), "x")
    rhs = compose(derive(f, "x"), sub, XY) * derive(u, "x") + \
        compose(derive(f, "y"), sub, XY) * derive(w, "x")
    assert lhs == rhs


@given(rationals())
def test_mixed_partials_commute(f):
    assert derive(derive(f, "x"), "y") == derive(derive(f, "y"), "x")


def test_tower_exponential():
    chart = Chart(("x", "y")).extend("t", {"y": "t"})
    t = chart.symbol("t")
    assert derive(t, "y") == t
    assert derive(t, "x") == chart.zero
    f = parse_expr("x*t^2", chart)
    assert derive(f, "y") == 2 * f


def test_tower_log_chain():
    chart = Chart(("x",)).extend("L", {"x": "1/x"})
    assert derive(parse_expr("L^2", chart), "x") == parse_expr("2*L/x", chart)


def test_tower_not_integrable():
    with pytest.raises(NonIntegrable):
        Chart(("x", "y")).extend("t", {"x": "y", "y": "0"})


def test_tower_name_clash():
    with pytest.raises(NameClash):
        Chart(("x", "y")).extend("x", {"x": "1"})


def test_formal_function_top_is_unknown():
    chart = Chart(("z",)).formal_function("nu", "z", 1)
    assert derive(chart.symbol("nu0"), "z") == chart.symbol("nu1")
    with pytest.raises(TowerInsufficient):
        derive(chart.symbol("nu1"), "z")


# -- parser ------------------------------------------------------------------------------------

@given(rationals())
def test_print_parse_round_trip(f):
    assert parse_expr(to_text(f), XY) == f


@given(rationals())
def test_print_is_canonical(f):
    assert to_text(parse_expr(to_text(f), XY)) == to_text(f)


@pytest.mark.parametrize("src, value", [
    ("2^3", Fraction(8)), ("-2^2", Fraction(-4)), ("1/2/2", Fraction(1, 4)),
    ("2^-1", Fraction(1, 2)), ("(1+1)*3", Fraction(6)), ("2 - -1", Fraction(3)),
])
def test_precedence(src, value):
    assert parse_expr(src).as_fraction() == value


def test_parameters_are_constants():
    f = parse_expr("alpha*x^2", ("x",), ("alpha",))
    assert derive(f, "x") == parse_expr("2*alpha*x", ("x",), ("alpha",))


@pytest.mark.parametrize("src", ["1//2", "x+", "(x", "x y", "2^x", "", "x^1/2^"])
def test_syntax_errors_have_positions(src):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(src, ("x", "y"))
    assert isinstance(info.value.position, int)
    assert "position" in info.value.to_dict()["witness"]


def test_unknown_symbol():
    with pytest.raises(UnknownSymbol):
        parse_expr("x + w", ("x", "y"))
