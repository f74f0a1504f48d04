from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from parallax.errors import SingularMatrix, Undecidable
from parallax.expr import Chart, parse_expr
from parallax.expr import linalg
from parallax.galois.classes import Tag, psl2, psl2_projection, sl2
from parallax.galois.classify import classify_reciprocal_sl2
from parallax.galois.hypergeometric import (HGParams, classify_hypergeometric,
                                            hypergeometric_normal_form, schwarz_match)
from parallax.galois.kovacic import kovacic
from parallax.galois.ode import LinearODE
from parallax.galois.symsquare import sym2_matrix, symmetric_square, verify_symmetric_square
from parallax.jets import line_chart
from strategies import small_fraction

Z = Chart(("z",))


def ode(r: str) -> LinearODE:
    return LinearODE.second_order(parse_expr(r, Z))


# -- symmetric square ------------------------------------------------------------------------

def test_symmetric_square_of_formal_potential():
    chart = line_chart((), True)
    L = LinearODE.second_order(chart.symbol("nu0"))
    S = symmetric_square(L)
    assert str(S) == "a''' + (-4*nu0)*a' + (-2*nu1)*a = 0"
    assert not any(verify_symmetric_square(L, S))


@pytest.mark.parametrize("r", ["0", "1", "z", "1/z^2 + 3/(z-1)", "(z^2+1)/(z^3-z)"])
def test_symmetric_square_oracle(r):
    assert not any(verify_symmetric_square(ode(r)))


def test_wrong_operator_fails_oracle():
    L = ode("z")
    wrong = LinearODE(Z, [parse_expr("-z", Z), parse_expr("-4*z", Z), 0], "z", "a")
    assert any(verify_symmetric_square(L, wrong))


def test_symmetric_square_zero_potential():
    assert str(symmetric_square(ode("0"))) == "a''' = 0"


matrices = st.lists(st.lists(small_fraction, min_size=2, max_size=2), min_size=2, max_size=2)


@given(matrices, matrices)
def test_sym2_is_multiplicative(M, N):
    assume(linalg.det(M) and linalg.det(N))
    MN = linalg.matmul(M, N)
    assert sym2_matrix(MN) == linalg.matmul(sym2_matrix(M), sym2_matrix(N))
    assert linalg.det(sym2_matrix(M)) == linalg.det(M) ** 3


def test_sym2_kernel_and_torus():
    assert sym2_matrix([[-1, 0], [0, -1]]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    u = Fraction(3, 7)
    assert sym2_matrix([[u, 0], [0, 1 / u]]) == [[u * u, 0, 0], [0, 1, 0], [0, 0, 1 / (u * u)]]
    with pytest.raises(SingularMatrix):
        sym2_matrix([[1, 2], [2, 4]])


# -- class bookkeeping -------------------------------------------------------------------------

@pytest.mark.parametrize("g, image", [
    (sl2(Tag.FINITE_CYCLIC, 4), psl2(Tag.FINITE_CYCLIC, 2)),
    (sl2(Tag.FINITE_CYCLIC, 2), psl2(Tag.TRIVIAL)),
    (sl2(Tag.FINITE_CYCLIC, 3), psl2(Tag.FINITE_CYCLIC, 3)),
    (sl2(Tag.BOREL, 2), psl2(Tag.UNIPOTENT)),
    (sl2(Tag.DIHEDRAL_FINITE, 12), psl2(Tag.DIHEDRAL_FINITE, 6)),
    (sl2(Tag.DIAGONAL_TORUS), psl2(Tag.DIAGONAL_TORUS)),
    (sl2(Tag.FULL), psl2(Tag.FULL)),
])
def test_psl2_projection(g, image):
    assert psl2_projection(g) == image


# -- kovacic -------------------------------------------------------------------------------------

@pytest.mark.parametrize("r, name", [
    ("0", "Trivial"),
    ("1", "DiagonalTorus"),
    ("z", "Full"),
    ("z^2", "Full"),
    ("z^2 + 3", "Borel"),
    ("2/z^2", "Trivial"),
    ("-1/(4*z^2)", "Borel(2)"),
    ("3/(16*z^2)", "DiagonalTorus"),
    ("-3/(16*z^2)", "FiniteCyclic(4)"),
    ("-3/(16*(z^2+1)^2)", "DiagonalTorus"),
    ("1/(4*z) - 3/(16*z^2)", "DihedralInfinite"),
    ("1 - 3/(16*z^2)", "Full"),
])
def test_kovacic_table(r, name):
    res = kovacic(r)
    assert res.group.name == name
    if res.certificate is not None:
        assert res.certificate.verified


def test_kovacic_torus_certificate():
    res = kovacic("1")
    assert res.case == 1 and res.certificate.verified
    assert sorted(str(w.as_expr()) for w in res.riccati_solutions) == ["-1", "1"]


def hg_pair(lmn):
    p = HGParams.from_lmn(*lmn)
    k = kovacic(hypergeometric_normal_form(p).base_potential)
    return classify_hypergeometric(p), k


@pytest.mark.parametrize("lmn", [
    ("1/3", "1/2", "1/3"), ("1/2", "1/3", "1/4"), ("1/2", "1/3", "1/5"), ("1/2", "1/2", "1/3"),
    ("1/2", "-7/2", "1/5"), ("0", "0", "0"), ("1/2", "1/2", "1"), ("2", "1/2", "1"),
])
def test_classifiers_agree_on_named_triples(lmn):
    hg, k = hg_pair(lmn)
    assert hg.sl2 == k.group
    if k.certificate is not None:
        assert k.certificate.verified


differences = st.builds(Fraction, st.integers(-3, 3), st.sampled_from([2, 3, 4, 5, 6]))


@settings(max_examples=30)
@given(st.tuples(differences, differences, differences))
def test_classifiers_agree_on_random_triples(lmn):
    hg, k = hg_pair([str(x) for x in lmn])
    assert hg.sl2 == k.group, [str(x) for x in lmn]
    if k.certificate is not None:
        assert k.certificate.verified


# -- exponent differences ----------------------------------------------------------------------

FAMILIES = [
    (HGParams.from_abc("1/2", "1/2", "1"), {}, "Full"),
    (HGParams.from_abc("-1", "0", "c"), {"c": "irrational"}, "Borel"),
    (HGParams.from_abc("a", "-a", "1/2"), {"a": "irrational"}, "DihedralInfinite"),
    (HGParams.from_lmn("1/3", "1/2", "1/3"), {}, "Tetrahedral"),
    (HGParams.from_lmn("1/2", "1/3", "1/4"), {}, "Octahedral"),
    (HGParams.from_lmn("1/2", "1/3", "1/5"), {}, "Icosahedral"),
]


@pytest.mark.parametrize("p, flags, name", FAMILIES)
def test_schwarz_symmetries(p, flags, name):
    lmn = [str(x) for x in p.lmn]
    seen = set()
    for perm in permutations(lmn):
        for signs in product((1, -1), repeat=3):
            q = HGParams.from_lmn(*[f"{s}*({v})" for s, v in zip(signs, perm)], flags=flags)
            seen.add(classify_hypergeometric(q).psl2.name)
    assert seen == {name}


@pytest.mark.parametrize("c", [1, -1, 2, -2, 3, -3])
def test_integer_c_is_unipotent(c):
    res = classify_hypergeometric(HGParams.from_abc("-1", "0", str(c)))
    assert res.psl2.name == "Unipotent"
    assert res.sl2.name == ("Borel(2)" if c % 2 else "Unipotent")


def test_c_zero_is_trivial():
    assert classify_hypergeometric(HGParams.from_abc("-1", "0", "0")).psl2.name == "Trivial"


def test_integer_flag_alone_is_undecidable():
    with pytest.raises(Undecidable) as info:
        classify_hypergeometric(HGParams.from_abc("-1", "0", "c"), {"c": "integer"})
    assert info.value.witness["flags"] == {"c": "integer"}


def test_missing_flag_is_undecidable():
    with pytest.raises(Undecidable):
        classify_hypergeometric(HGParams.from_abc("-1", "0", "c"))


def test_schwarz_table_shifts():
    assert schwarz_match([Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]) == Tag.ICOSAHEDRAL
    assert schwarz_match([Fraction(3, 2), Fraction(4, 3), Fraction(1, 5)]) == Tag.ICOSAHEDRAL
    # a half-integer entry absorbs the parity condition: -1/2 + 2 = 3/2
    assert schwarz_match([Fraction(3, 2), Fraction(1, 3), Fraction(1, 5)]) == Tag.ICOSAHEDRAL
    assert schwarz_match([Fraction(1, 7)] * 3) is None
    assert schwarz_match([Fraction(1, 2), Fraction(1, 3), Fraction(1, 7)]) is None


def test_normal_form_potential():
    nf = hypergeometric_normal_form(HGParams.from_abc("1/2", "1/2", "1"))
    assert nf.nu == parse_expr("(z^2 - z + 1)/(4*z^2*(z-1)^2)", Z.with_parameters())


# -- full pipeline -------------------------------------------------------------------------------

def test_pipeline_legendre():
    rep = classify_reciprocal_sl2(HGParams.from_abc("1/2", "1/2", "1"))
    assert rep.matches_closed_form
    assert rep.psl2.name == "Full"


def test_pipeline_numeric_nu():
    rep = classify_reciprocal_sl2("-2")
    assert rep.matches_closed_form and rep.sl2.name == "DiagonalTorus"
    assert rep.base_equation == ode("1")


def test_pipeline_zero_nu():
    rep = classify_reciprocal_sl2("0")
    assert rep.sl2.name == "Trivial" and rep.psl2.name == "Trivial"
    assert str(rep.symmetry_ode) == "a''' = 0"


def test_pipeline_convention_is_reported():
    data = classify_reciprocal_sl2("1/z^2 + 3/z").to_json()
    assert "y'' = -(nu/2) y" in data["convention"]
    assert data["psl2_class"] == "Full"
