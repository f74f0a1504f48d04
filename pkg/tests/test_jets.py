from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parallax.errors import OrderTooSmall
from parallax.expr import Chart, parse_expr
from parallax.jets import (derive_symmetry_ode, expected_lin, ideal_identities, jet_bracket,
                           sl2_frame, witt_prolong)
from parallax.liealg import StructureConstants
from parallax.parallelism import infer_structure_constants
from strategies import nonzero_polynomials, polynomials

Z = Chart(("z",))

potentials = st.builds(lambda p, q: p / q, polynomials(Z, max_terms=3, max_degree=3),
                       nonzero_polynomials(Z, max_terms=2, max_degree=2))

# realized brackets of (E_-1, E_0, E_1) on the threefold
REALIZED = StructureConstants.from_brackets(3, {(0, 1): {0: -1}, (0, 2): {1: -2}, (1, 2): {2: -1}})


@pytest.mark.parametrize("m, n", [(-1, 0), (-1, 1), (0, 1), (0, 2), (1, 2), (-1, 2)])
def test_witt_relations(m, n):
    k = 5
    br = jet_bracket(witt_prolong(m, k), witt_prolong(n, k))
    target = witt_prolong(m + n, k) if m + n >= -1 else None
    for i in range(k):  # the top component needs z_{k+1} derivatives
        want = (m - n) * target.coeffs[i] if target is not None else 0
        assert br.coeffs[i] == want


def test_witt_order_too_small():
    with pytest.raises(OrderTooSmall):
        witt_prolong(3, 1)


def test_ideal_identities_symbolic():
    e0, e1 = ideal_identities()
    assert e0.is_zero and e1.is_zero


@settings(max_examples=25)
@given(potentials)
def test_ideal_identities_numeric(nu):
    e0, e1 = ideal_identities(nu)
    assert e0.is_zero and e1.is_zero


def test_ideal_identities_with_parameters():
    nu = parse_expr("alpha/z^2 + beta/(z-1)", ("z",), ("alpha", "beta"))
    e0, e1 = ideal_identities(nu)
    assert e0.is_zero and e1.is_zero


@settings(max_examples=25)
@given(potentials)
def test_sl2_frame_constants_do_not_depend_on_nu(nu):
    F = sl2_frame(nu)
    assert infer_structure_constants(F) == REALIZED
    assert str(F.det()) == "2*z1^3"


def test_sl2_frame_symbolic():
    F = sl2_frame()
    assert infer_structure_constants(F) == REALIZED
    assert F.det() == 2 * F.chart.symbol("z1") ** 3


def test_symmetry_ode_symbolic():
    ode = derive_symmetry_ode()
    assert ode == expected_lin()
    assert str(ode) == "a''' + (2*nu0)*a' + (nu1)*a = 0"


@settings(max_examples=12)
@given(potentials)
def test_symmetry_ode_numeric(nu):
    assert derive_symmetry_ode(nu) == expected_lin(nu)


def test_symmetry_ode_zero_potential():
    ode = derive_symmetry_ode("0")
    assert str(ode) == "a''' = 0"
