"""Gauss hypergeometric equations: parameters, normal form, and the
exponent-difference classifier.

Parameters may be exact rationals or affine expressions in named symbols.
A symbol can carry one of three flags:

``irrational``
    treated as a generic (transcendental) constant: any affine form with a
    nonzero coefficient on it is irrational;
``rational``
    known to be rational, value otherwise unknown;
``integer``
    known to be an integer, value otherwise unknown.

Every yes/no question asked by the classifier is either decided from this
information or raises :class:`Undecidable` naming the question.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import gcd, lcm

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..errors import Undecidable
from ..expr import Chart, ConstField, RatExpr, parse_expr
from .classes import GaloisClass, Tag, psl2_projection, sl2

FLAGS = ("irrational", "rational", "integer")
Z = sympy.Symbol("z")

# Exponent-difference triples of the finite irreducible projective groups
# (dihedral families excluded), with the group they produce.
SCHWARZ_TABLE = (
    ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 3)), Tag.TETRAHEDRAL),
    ((Fraction(2, 3), Fraction(1, 3), Fraction(1, 3)), Tag.TETRAHEDRAL),
    ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)), Tag.OCTAHEDRAL),
    ((Fraction(2, 3), Fraction(1, 4), Fraction(1, 4)), Tag.OCTAHEDRAL),
    ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)), Tag.ICOSAHEDRAL),
    ((Fraction(2, 5), Fraction(1, 3), Fraction(1, 3)), Tag.ICOSAHEDRAL),
    ((Fraction(2, 3), Fraction(1, 5), Fraction(1, 5)), Tag.ICOSAHEDRAL),
    ((Fraction(1, 2), Fraction(2, 5), Fraction(1, 5)), Tag.ICOSAHEDRAL),
    ((Fraction(3, 5), Fraction(1, 3), Fraction(1, 5)), Tag.ICOSAHEDRAL),
    ((Fraction(2, 5), Fraction(2, 5), Fraction(2, 5)), Tag.ICOSAHEDRAL),
    ((Fraction(2, 3), Fraction(1, 3), Fraction(1, 5)), Tag.ICOSAHEDRAL),
    ((Fraction(4, 5), Fraction(1, 5), Fraction(1, 5)), Tag.ICOSAHEDRAL),
    ((Fraction(1, 2), Fraction(2, 5), Fraction(1, 3)), Tag.ICOSAHEDRAL),
    ((Fraction(3, 5), Fraction(2, 5), Fraction(1, 3)), Tag.ICOSAHEDRAL),
)


# ---------------------------------------------------------------------------
# affine forms in flagged parameters
# ---------------------------------------------------------------------------

def _to_fraction(x) -> Fraction:
    x = sympy.nsimplify(x) if not isinstance(x, (int, Fraction)) else x
    if isinstance(x, Fraction):
        return x
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _rgcd(x: Fraction, y: Fraction) -> Fraction:
    """Generator of the subgroup xZ + yZ of Q (non-negative)."""
    if x == 0:
        return abs(y)
    if y == 0:
        return abs(x)
    return Fraction(gcd(x.numerator * y.denominator, y.numerator * x.denominator),
                    x.denominator * y.denominator)


@dataclass(frozen=True)
class Affine:
    """q0 + sum q_p * p with rational coefficients."""

    const: Fraction
    coeffs: tuple        # ((name, Fraction), ...) sorted, nonzero only

    @classmethod
    def of(cls, expr, names) -> "Affine":
        expr = sympy.expand(sympy.sympify(expr))
        syms = [sympy.Symbol(n) for n in names]
        extra = expr.free_symbols - set(syms)
        if extra:
            raise ValueError(f"unknown symbols {sorted(map(str, extra))}")
        poly = sympy.Poly(expr, *syms) if syms else None
        if poly is not None and poly.total_degree() > 1:
            raise ValueError(f"{expr} is not affine in the parameters")
        const = _to_fraction(expr.subs({s: 0 for s in syms}))
        coeffs = []
        for s in syms:
            c = _to_fraction(sympy.diff(expr, s))
            if c:
                coeffs.append((str(s), c))
        return cls(const, tuple(sorted(coeffs)))

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def __str__(self):
        return str(self.to_sympy())

    def to_sympy(self):
        return sympy.Rational(self.const.numerator, self.const.denominator) + sum(
            (sympy.Rational(c.numerator, c.denominator) * sympy.Symbol(n) for n, c in self.coeffs),
            sympy.Integer(0))


class Predicates:
    """Tri-state arithmetic questions on affine forms, given per-parameter flags."""

    def __init__(self, flags: dict):
        for name, flag in flags.items():
            if flag not in FLAGS:
                raise ValueError(f"unknown flag {flag!r} for {name}; expected one of {FLAGS}")
        self.flags = dict(flags)

    def _kinds(self, L: Affine):
        return {self.flags.get(n) for n, _ in L.coeffs}

    def _undecidable(self, question, L: Affine):
        return Undecidable(f"cannot decide whether {L} {question} from the given flags",
                           form=str(L), question=question,
                           flags={n: self.flags.get(n, "unflagged") for n, _ in L.coeffs})

    def is_rational(self, L: Affine) -> bool:
        kinds = self._kinds(L)
        if "irrational" in kinds:
            return False
        if kinds <= {"rational", "integer"}:
            return True
        raise self._undecidable("is rational", L)

    def in_coset(self, L: Affine, t: Fraction, s: Fraction, question: str) -> bool:
        """Is L in t + sZ ?"""
        kinds = self._kinds(L)
        if "irrational" in kinds:
            return False
        if L.is_constant:
            return ((L.const - t) / s).denominator == 1
        if kinds == {"integer"}:
            g = Fraction(0)
            for _, c in L.coeffs:
                g = _rgcd(g, c)
            # values of L run through const + gZ
            if ((L.const - t) / s).denominator == 1 and (g / s).denominator == 1:
                return True
            if ((L.const - t) / _rgcd(s, g)).denominator != 1:
                return False
        raise self._undecidable(question, L)

    def is_integer(self, L):
        return self.in_coset(L, Fraction(0), Fraction(1), "is an integer")

    def is_odd(self, L):
        return self.in_coset(L, Fraction(1), Fraction(2), "is an odd integer")

    def is_half_odd(self, L):
        return self.in_coset(L, Fraction(1, 2), Fraction(1), "lies in 1/2 + Z")

    def denominator(self, L: Affine) -> int:
        if L.is_constant:
            return L.const.denominator
        if self._kinds(L) == {"integer"} and all(c.denominator == 1 for _, c in L.coeffs):
            return L.const.denominator
        raise self._undecidable("has a known denominator", L)

    def nonnegative_integer(self, L: Affine) -> int | None:
        """The value of L when it is a non-negative integer, None when it is not one."""
        if not self.is_integer(L):
            return None
        if L.is_constant:
            return int(L.const) if L.const >= 0 else None
        raise self._undecidable("is a non-negative integer", L)


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _parse_value(v, names):
    if isinstance(v, RatExpr):
        return v.to_sympy()
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    if isinstance(v, int):
        return sympy.Integer(v)
    if isinstance(v, str):
        return parse_expr(v, (), ConstField(tuple(names))).to_sympy()
    return sympy.sympify(v)


@dataclass(frozen=True)
class HGParams:
    """Parameters (a, b, c) of z(1-z)F'' + (c - (a+b+1)z)F' - abF = 0.

    Build with :meth:`from_abc` or :meth:`from_lmn`; both forms are stored
    and satisfy l = 1-c, m = c-a-b, n = a-b.
    """

    a: Affine
    b: Affine
    c: Affine
    params: tuple = ()
    flags: dict = field(default_factory=dict, hash=False, compare=False)

    @classmethod
    def _build(cls, values, flags, from_lmn):
        flags = dict(flags or {})
        names = set(flags)
        for v in values:
            if isinstance(v, str):
                names.update(_IDENT.findall(v))
            elif isinstance(v, RatExpr):
                names.update(v.chart.parameters)
            elif not isinstance(v, (int, Fraction)):
                names.update(str(s) for s in sympy.sympify(v).free_symbols)
        names = tuple(sorted(names))
        exprs = [_parse_value(v, names) for v in values]
        if from_lmn:
            l, m, n = exprs
            half = sympy.Rational(1, 2)
            exprs = [half * (1 - l - m + n), half * (1 - l - m - n), 1 - l]
        a, b, c = (Affine.of(e, names) for e in exprs)
        return cls(a, b, c, names, flags)

    @classmethod
    def from_abc(cls, a, b, c, flags=None) -> "HGParams":
        return cls._build((a, b, c), flags, False)

    @classmethod
    def from_lmn(cls, l, m, n, flags=None) -> "HGParams":
        return cls._build((l, m, n), flags, True)

    def _aff(self, e):
        return Affine.of(e, self.params)

    @property
    def abc(self):
        return tuple(x.to_sympy() for x in (self.a, self.b, self.c))

    @property
    def lmn(self):
        a, b, c = self.abc
        return (1 - c, c - a - b, a - b)

    @property
    def lmn_affine(self):
        return tuple(self._aff(e) for e in self.lmn)

    @property
    def predicates(self) -> Predicates:
        return Predicates(self.flags)

    @property
    def is_numeric(self) -> bool:
        return all(x.is_constant for x in (self.a, self.b, self.c))

    def to_json(self) -> dict:
        a, b, c = self.abc
        l, m, n = self.lmn
        return {"a": str(a), "b": str(b), "c": str(c), "l": str(l), "m": str(m), "n": str(n),
                "flags": dict(sorted(self.flags.items()))}


# ---------------------------------------------------------------------------
# normal form
# ---------------------------------------------------------------------------

def potential_expr(l, m, n):
    """(1-l^2)/(4z^2) + (1-m^2)/(4(1-z)^2) + (1-l^2-m^2+n^2)/(4z(1-z)) as a sympy expression."""
    return ((1 - l ** 2) / (4 * Z ** 2) + (1 - m ** 2) / (4 * (1 - Z) ** 2)
            + (1 - l ** 2 - m ** 2 + n ** 2) / (4 * Z * (1 - Z)))


@dataclass
class NormalForm:
    """y = z^(c/2) (1-z)^((a+b+1-c)/2) F turns the equation into y'' + nu y = 0."""

    params: HGParams
    nu: RatExpr                 # the potential in the variable z
    multiplier: tuple           # exponents (e0, e1) with F = z^e0 (1-z)^e1 y

    @property
    def base_potential(self) -> RatExpr:
        """r with y'' = r y; here r = -nu."""
        return -self.nu

    @property
    def sl2_nu(self) -> RatExpr:
        """The potential whose symmetry equation is the symmetric square of y'' = -nu y."""
        return 2 * self.nu

    def to_json(self) -> dict:
        return {"nu": str(self.nu), "multiplier_exponents": [str(e) for e in self.multiplier],
                "equation": "y'' + nu*y = 0", "parameters": self.params.to_json()}


def hypergeometric_normal_form(p: HGParams) -> NormalForm:
    l, m, n = p.lmn
    chart = Chart(("z",), ConstField(tuple(p.params)))
    text = str(sympy.together(potential_expr(l, m, n))).replace("**", "^")
    nu = parse_expr(text, chart)
    a, b, c = p.abc
    return NormalForm(p, nu, (-c / 2, (c - a - b - 1) / 2))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class HGClassification:
    sl2: GaloisClass
    psl2: GaloisClass
    branch: str                  # reducible | dihedral | schwarz | generic
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"sl2_class": self.sl2.name, "psl2_class": self.psl2.name, "branch": self.branch,
                "detail": self.detail}


def schwarz_match(lmn) -> Tag | None:
    """Table tag when (l, m, n) is Schwarz-equivalent to a listed triple.

    Equivalence: permutations, sign changes, and integer shifts whose sum is even.
    """
    x = [abs(Fraction(v)) for v in lmn]
    for row, tag in SCHWARZ_TABLE:
        for perm in permutations(row):
            for signs in product((1, -1), repeat=3):
                shifts = [x[i] - signs[i] * perm[i] for i in range(3)]
                if all(s.denominator == 1 for s in shifts) and sum(shifts) % 2 == 0:
                    return tag
    return None


def _reducible(P: Predicates, lmn) -> tuple[bool, str | None]:
    l, m, n = lmn
    pending = None
    for sl, sm, sn in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)):
        form = Affine(sl * l.const + sm * m.const + sn * n.const, _combine(
            [(l, sl), (m, sm), (n, sn)]))
        try:
            if P.is_odd(form):
                return True, str(form)
        except Undecidable as exc:
            pending = pending or exc
    if pending is not None:
        raise pending
    return False, None


def _combine(pairs):
    acc = {}
    for L, s in pairs:
        for name, c in L.coeffs:
            acc[name] = acc.get(name, Fraction(0)) + s * c
    return tuple(sorted((k, v) for k, v in acc.items() if v))


def _affine_add(*terms):
    const = sum((s * L.const for L, s in terms), Fraction(0))
    return Affine(const, _combine(terms))


def _dedupe(forms):
    out = []
    for f in forms:
        if f not in out:
            out.append(f)
    return out


def _lines(p: HGParams, P: Predicates, nu_expr):
    """Invariant lines of y'' + nu y = 0 of the form z^al (1-z)^be P(z).

    Returns a list of (omega, alpha, beta) with omega = y'/y, plus a flag that
    is True when a single family already spans the whole solution space.
    """
    l, m, n = p.lmn_affine
    half = Fraction(1, 2)
    at0 = _dedupe([Affine(half + s * half * l.const, tuple((k, s * half * c) for k, c in l.coeffs))
                   for s in (1, -1)])
    at1 = _dedupe([Affine(half + s * half * m.const, tuple((k, s * half * c) for k, c in m.coeffs))
                   for s in (1, -1)])
    atinf = _dedupe([Affine(half + s * half * n.const, tuple((k, s * half * c) for k, c in n.coeffs))
                     for s in (1, -1)])
    found = []
    whole_space = False
    for al, be in product(at0, at1):
        degrees = []
        for e in atinf:
            d = P.nonnegative_integer(_affine_add((e, 1), (al, -1), (be, -1)))
            if d is not None:
                degrees.append(d)
        if not degrees:
            continue
        D = max(degrees)
        alpha, beta = al.to_sympy(), be.to_sympy()
        theta = alpha / Z - beta / (1 - Z)
        coeffs = sympy.symbols(f"p0:{D + 1}")
        poly = sum(c * Z ** i for i, c in enumerate(coeffs))
        expr = sympy.diff(poly, Z, 2) + 2 * theta * sympy.diff(poly, Z) + \
            (sympy.diff(theta, Z) + theta ** 2 + nu_expr) * poly
        num = sympy.numer(sympy.together(expr))
        num = sympy.Poly(sympy.expand(num), Z)
        rows = [[sympy.expand(c).coeff(v) for v in coeffs] for c in num.all_coeffs()]
        syms = sorted({s for row in rows for e in row for s in e.free_symbols}, key=str)
        weak = [str(s) for s in syms if P.flags.get(str(s)) != "irrational"]
        if weak:
            raise Undecidable("the polynomial-solution system depends on parameters that are not "
                              "flagged irrational", parameters=weak, exponents=[str(al), str(be)])
        dom = QQ.frac_field(*syms) if syms else QQ
        M = DomainMatrix([[dom.from_sympy(e) for e in row] for row in rows],
                         (len(rows), D + 1), dom)
        basis = M.nullspace().to_list()
        if len(basis) >= 2:
            whole_space = True
        for vec in basis:
            Pz = sum(dom.to_sympy(c) * Z ** i for i, c in enumerate(vec))
            omega = sympy.cancel(theta + sympy.diff(Pz, Z) / Pz)
            if all(sympy.cancel(omega - w) != 0 for w, _, _ in found):
                found.append((omega, al, be))
    return found, whole_space


def _sl2_from_lines(P: Predicates, found, whole_space) -> tuple[GaloisClass, dict]:
    omega, al, be = found[0]
    algebraic = P.is_rational(al) and P.is_rational(be)
    k = lcm(P.denominator(al), P.denominator(be)) if algebraic else None
    detail = {"lines": len(found) if not whole_space else "all",
              "exponents": [str(al), str(be)], "omega": str(omega)}
    if whole_space or len(found) >= 2:
        if algebraic:
            return (sl2(Tag.TRIVIAL) if k == 1 else sl2(Tag.FINITE_CYCLIC, k)), detail
        return sl2(Tag.DIAGONAL_TORUS), detail
    if algebraic:
        return (sl2(Tag.UNIPOTENT) if k == 1 else sl2(Tag.BOREL, k)), detail
    return sl2(Tag.BOREL), detail


def classify_hypergeometric(p: HGParams, flags: dict | None = None) -> HGClassification:
    """Galois group of the normal form y'' + nu y = 0 (SL2) and its PSL2 image."""
    if flags:
        p = HGParams(p.a, p.b, p.c, tuple(sorted(set(p.params) | set(flags))),
                     {**p.flags, **flags})
    P = p.predicates
    lmn = p.lmn_affine
    red, witness = _reducible(P, lmn)
    if red:
        l, m, n = p.lmn
        found, whole = _lines(p, P, potential_expr(l, m, n))
        if not found:
            raise AssertionError("reducible equation without an invariant line")
        g, detail = _sl2_from_lines(P, found, whole)
        detail["odd_integer_combination"] = witness
        return HGClassification(g, psl2_projection(g), "reducible", detail)

    halves, undecided = [], []
    for i, L in enumerate(lmn):
        try:
            if P.is_half_odd(L):
                halves.append(i)
        except Undecidable as exc:
            undecided.append(exc)
    if len(halves) >= 2:
        t = lmn[({0, 1, 2} - set(halves[:2])).pop()]
        if P.is_rational(t):
            g = sl2(Tag.DIHEDRAL_FINITE, 4 * P.denominator(t))
        else:
            g = sl2(Tag.DIHEDRAL_INFINITE)
        return HGClassification(g, psl2_projection(g), "dihedral", {"third": str(t)})
    if len(halves) + len(undecided) >= 2:
        raise undecided[0]

    if all(L.is_constant for L in lmn):
        tag = schwarz_match([L.const for L in lmn])
        if tag is not None:
            g = sl2(tag)
            return HGClassification(g, psl2_projection(g), "schwarz", {})
    elif all(P.is_rational(L) for L in lmn):
        raise Undecidable("exponent differences are rational but not known exactly; "
                          "membership in the finite list cannot be decided",
                          lmn=[str(L) for L in lmn])
    g = sl2(Tag.FULL)
    return HGClassification(g, psl2_projection(g), "generic", {})
