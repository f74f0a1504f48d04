"""Hypothesis strategies shared by the property suites."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from parallax.expr import Chart

XY = Chart(("x", "y"))
XYZ = Chart(("x", "y", "z"))

small_fraction = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def polynomials(draw, chart=XY, max_terms=4, max_degree=2):
    f = chart.zero
    for _ in range(draw(st.integers(0, max_terms))):
        term = chart.const(draw(small_fraction))
        for v in chart.variables:
            term = term * chart.symbol(v) ** draw(st.integers(0, max_degree))
        f = f + term
    return f


@st.composite
def nonzero_polynomials(draw, chart=XY, max_terms=3, max_degree=2):
    f = draw(polynomials(chart, max_terms, max_degree))
    if f.is_zero:
        f = f + chart.const(draw(st.integers(1, 3)))
    return f


@st.composite
def rationals(draw, chart=XY):
    return draw(polynomials(chart)) / draw(nonzero_polynomials(chart, max_terms=2))


# -- frame connections ------------------------------------------------------------------------

def _zero3(chart):
    n = chart.dim
    return [[[chart.zero] * n for _ in range(n)] for _ in range(n)]


@st.composite
def connections(draw, family=None):
    """Frame connections with polynomial Christoffels of degree <= 2 in 2 or 3 variables.

    Families: ``random`` (sparse random entries, almost never flat), ``pencil``
    (coordinate Christoffels Gamma_i = f_i(x_i) N + g_i I, flat by construction),
    ``associated`` (the connection of a unimodular triangular frame, written in
    coordinates) and ``reciprocal`` (the reciprocal of an associated one).
    """
    from parallax.connection import FrameConnection, associated_connection, reciprocal, to_coordinates
    from parallax.parallelism import Frame

    chart = draw(st.sampled_from([XY, XYZ]))
    n = chart.dim
    vs = chart.variables
    family = family or draw(st.sampled_from(["random", "pencil", "associated", "reciprocal"]))
    coord = Frame.coordinate(chart)
    if family == "random":
        g = _zero3(chart)
        for _ in range(draw(st.integers(1, 4))):
            i, j, k = (draw(st.integers(0, n - 1)) for _ in range(3))
            g[i][j][k] = draw(polynomials(chart, max_terms=2, max_degree=1))
        return FrameConnection(coord, g)
    if family == "pencil":
        N = [[draw(st.integers(-2, 2)) for _ in range(n)] for _ in range(n)]
        g = _zero3(chart)
        for i in range(n):
            f = sum((chart.const(draw(st.integers(-2, 2))) * chart.symbol(vs[i]) ** e for e in range(3)),
                    chart.zero)
            shift = chart.const(draw(st.integers(-1, 1)))
            for j in range(n):
                for k in range(n):
                    g[i][j][k] = f * N[k][j] + (shift if j == k else chart.zero)
        return FrameConnection(coord, g)
    # unimodular upper-triangular frame: X_i = d_i + sum_{j > i} p_ij d_j, p_ij free of x_j.. x_n
    rows = []
    for i in range(n):
        row = [chart.zero] * n
        row[i] = chart.one
        for j in range(i + 1, n):
            sub = Chart(tuple(v for a, v in enumerate(vs) if a != j))
            p = draw(polynomials(sub, max_terms=2, max_degree=1))
            row[j] = p.lift(chart)
        rows.append(row)
    C = associated_connection(Frame(chart, rows))
    if family == "reciprocal":
        C = reciprocal(C)
    return to_coordinates(C)
