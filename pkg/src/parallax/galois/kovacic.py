"""Kovacic's algorithm for y'' = r y with r in Q(z).

All computations are exact.  Poles of r and the square roots needed by the
local analysis are adjoined up front, giving a number field K; the rest is
linear algebra over K.  Every certificate is re-verified before it is
returned: a polynomial F(omega) whose roots solve the Riccati equation
omega' + omega^2 = r is checked by reducing the Riccati vector field applied
to F modulo F.

The SL2 group is refined beyond the three cases:
case 1 counts invariant lines and decides finiteness of the character,
case 2 decides finite versus infinite dihedral from the differential
sqrt(R) dz on the quadratic cover (genus 0 only).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial, lcm

import sympy
from sympy import QQ, Poly, Rational
from sympy.polys.matrices import DomainMatrix

from ..errors import Undecidable
from ..expr import RatExpr
from .classes import GaloisClass, Tag, sl2

Z = sympy.Symbol("z")
MAX_FIELD_DEGREE = 32


# ---------------------------------------------------------------------------
# univariate rational functions over a number field
# ---------------------------------------------------------------------------

class KRat:
    """Reduced quotient num/den of univariate polynomials over a field K."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, reduce: bool = True):
        if den is None:
            den = Poly(1, Z, domain=num.domain)
        if reduce:
            if den.is_zero:
                raise ZeroDivisionError("zero denominator")
            if num.is_zero:
                den = Poly(1, Z, domain=num.domain)
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = num.quo(g)
                    den = den.quo(g)
                lc = _lc(den)
                if lc != den.domain.one:
                    inv = den.domain.one / lc
                    num = num.mul_ground(inv)
                    den = den.mul_ground(inv)
        self.num = num
        self.den = den

    @property
    def K(self):
        return self.num.domain

    def __add__(self, o):
        o = _lift(self, o)
        if self.den == o.den:
            return KRat(self.num + o.num, self.den)
        return KRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, o):
        return self + (-_lift(self, o))

    def __rsub__(self, o):
        return _lift(self, o) - self

    def __neg__(self):
        return KRat(-self.num, self.den, False)

    def __mul__(self, o):
        o = _lift(self, o)
        return KRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _lift(self, o)
        return KRat(self.num * o.den, self.den * o.num)

    def __pow__(self, n):
        return KRat(self.num ** n, self.den ** n, False) if n >= 0 else KRat(self.den ** -n, self.num ** -n)

    def diff(self):
        return KRat(self.num.diff(Z) * self.den - self.num * self.den.diff(Z), self.den ** 2)

    def is_zero(self):
        return self.num.is_zero

    def __eq__(self, o):
        o = _lift(self, o)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def __repr__(self):
        return f"KRat({sympy.simplify(self.as_expr())})"


def _lift(a: KRat, o):
    if isinstance(o, KRat):
        return o
    if isinstance(o, Poly):
        return KRat(o, None, False)
    if isinstance(o, Fraction):
        o = Rational(o.numerator, o.denominator)
    return _const(a.K, o)


def _const(K, c) -> KRat:
    return KRat(Poly.from_list([K.convert(c)], Z, domain=K), None, False)



def _cf(p: Poly) -> list:
    """Coefficients as domain elements, highest degree first."""
    return p.rep.to_list()


def _lc(p: Poly):
    return p.rep.LC()


def _coeff(p: Poly, k: int, K):
    c = _cf(p)
    return c[len(c) - 1 - k] if k < len(c) else K.zero


def _linear(K, c) -> Poly:
    """z - c."""
    return Poly([K.one, -c], Z, domain=K)


# ---------------------------------------------------------------------------
# exact number-field helpers
# ---------------------------------------------------------------------------

def as_rational(K, e) -> Fraction | None:
    if K.is_QQ:
        return Fraction(int(e.numerator), int(e.denominator))
    s = K.to_sympy(e)
    if s.is_Rational:
        return Fraction(int(s.p), int(s.q))
    return None


def _nonneg_int(K, e):
    q = as_rational(K, e)
    if q is not None and q.denominator == 1 and q >= 0:
        return int(q)
    return None


def _int(K, e):
    q = as_rational(K, e)
    if q is not None and q.denominator == 1:
        return int(q)
    return None


def _laurent(num: Poly, den: Poly, at, n: int):
    """Laurent coefficients of num/den at z = at (or at infinity if ``at`` is None).

    Returns (valuation, [c_v, c_{v+1}, ..., c_{v+n-1}]) in the local parameter
    u = z - at (or u = 1/z).
    """
    K = num.domain
    if at is None:
        # num(1/u) = u^-deg(num) * (high-first coefficients read as a series in u)
        a_low = _cf(num)
        b_low = _cf(den)
        shift = den.degree() - num.degree()
    else:
        move = Poly.from_list([K.one, at], Z, domain=K)   # z -> z + at
        a_low = list(reversed(_cf(num.compose(move))))
        b_low = list(reversed(_cf(den.compose(move))))
        va = next(i for i, c in enumerate(a_low) if c)
        vb = next(i for i, c in enumerate(b_low) if c)
        a_low = a_low[va:]
        b_low = b_low[vb:]
        shift = va - vb
    out = []
    inv = K.one / b_low[0]
    for k in range(n):
        s = a_low[k] if k < len(a_low) else K.zero
        for j in range(1, min(k, len(b_low) - 1) + 1):
            s -= b_low[j] * out[k - j]
        out.append(s * inv)
    return shift, out


def _sqrt_series(c, n, K):
    """Power series square root of c[0] + c[1] u + ... (c[0] must be a square in K)."""
    g0 = _sqrt_in(K, c[0])
    g = [g0]
    for k in range(1, n):
        s = c[k] if k < len(c) else K.zero
        for i in range(1, k):
            s -= g[i] * g[k - i]
        g.append(s / (2 * g0))
    return g


def _sqrt_in(K, e):
    s = sympy.sqrt(K.to_sympy(e))
    try:
        v = K.from_sympy(s)
    except Exception:
        v = None
    if v is None or v * v != e:
        # search among roots of x^2 - e over K
        fac = Poly([K.one, K.zero, -e], Z, domain=K).factor_list()[1]
        for f, _ in fac:
            if f.degree() == 1:
                return -_cf(f)[1] / _cf(f)[0]
        raise ValueError("square root not in the field")
    return v


def _is_square_in(K, e) -> bool:
    if not e:
        return True
    fac = Poly([K.one, K.zero, -e], Z, domain=K).factor_list()[1]
    return any(f.degree() == 1 for f, _ in fac)


# ---------------------------------------------------------------------------
# places of r
# ---------------------------------------------------------------------------

@dataclass
class _Place:
    at: object            # K element, or None for infinity
    order: float          # pole order (finite) / order at infinity
    laurent: tuple = ()   # (valuation, coefficients)


def _setup(r_expr):
    """Return (K, rK, places) with all data needed by the three cases."""
    r_expr = sympy.together(sympy.sympify(r_expr))
    num, den = sympy.fraction(r_expr)
    s = Poly(num, Z, domain=QQ)
    t = Poly(den, Z, domain=QQ)
    g = s.gcd(t)
    s, t = s.quo(g), t.quo(g)
    lc = t.LC()
    s, t = s.quo_ground(lc), t.quo_ground(lc)
    roots = []
    for f, m in t.factor_list()[1]:
        if f.degree() == 1:
            roots.append((-f.all_coeffs()[1] / f.all_coeffs()[0], m, f))
        else:
            for rt in f.all_roots():
                roots.append((rt, m, f))
    gens = [rt for rt, _, f in roots if f.degree() > 1]
    K = QQ.algebraic_field(*gens) if gens else QQ
    if not K.is_QQ and K.ext.minpoly.degree() > MAX_FIELD_DEGREE:
        raise Undecidable("splitting field of the poles is too large", degree=K.ext.minpoly.degree())

    def places_in(K):
        sK = Poly(s.as_expr(), Z, domain=K)
        tK = Poly(t.as_expr(), Z, domain=K)
        pl = []
        for rt, m, _ in roots:
            pl.append(_Place(K.from_sympy(rt) if not K.is_QQ else QQ.convert(rt), m))
        o_inf = float("inf") if s.is_zero else t.degree() - s.degree()
        pl.append(_Place(None, o_inf))
        return sK, tK, pl

    sK, tK, pl = places_in(K)
    # square roots needed by the local analysis
    needed = []
    for p in pl:
        if p.order == float("inf"):
            continue
        if p.at is not None and (p.order == 2 or (p.order >= 4 and p.order % 2 == 0)):
            v, c = _laurent(sK, tK, p.at, 2)
        elif p.at is None and (p.order == 2 or (p.order <= 0 and p.order % 2 == 0)):
            v, c = _laurent(sK, tK, None, 1)
        else:
            continue
        if p.order == 2:
            x = 1 + 4 * c[0]
        else:
            x = c[0]
        if not _is_square_in(K, K.convert(x)):
            needed.append(sympy.sqrt(K.to_sympy(K.convert(x))))
    if needed:
        K = QQ.algebraic_field(*(gens + needed))
        if K.ext.minpoly.degree() > MAX_FIELD_DEGREE:
            raise Undecidable("number field for the local data is too large",
                              degree=K.ext.minpoly.degree())
        sK, tK, pl = places_in(K)
    rK = KRat(sK, tK)
    return K, rK, pl


# ---------------------------------------------------------------------------
# linear solving for polynomial solutions
# ---------------------------------------------------------------------------

def _poly_solutions(K, apply, d: int):
    """Basis of polynomials P (deg <= d) with apply(P) == 0 (apply is K-linear)."""
    images = [apply(KRat(Poly.from_list([K.one] + [K.zero] * i, Z, domain=K), None, False))
              for i in range(d + 1)]
    images = [KRat(im, None, False) if isinstance(im, Poly) else im for im in images]
    den = Poly(1, Z, domain=K)
    for im in images:
        den = den.lcm(im.den)
    nums = [im.num * den.quo(im.den) for im in images]
    height = max((n.degree() for n in nums if not n.is_zero), default=0) + 1
    rows = []
    for k in range(height):
        rows.append([_coeff(n, k, K) for n in nums])
    if height == 0:
        vectors = [[K.one if i == j else K.zero for j in range(d + 1)] for i in range(d + 1)]
    else:
        vectors = DomainMatrix(rows, (height, d + 1), K).nullspace().to_list()
    basis = []
    for vec in vectors:
        basis.append(Poly.from_list(list(reversed(vec)), Z, domain=K))
    return basis


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def _riccati_check(coeffs, r: KRat) -> bool:
    """True when every root of sum coeffs[i] w^i solves w' + w^2 = r.

    D(F) = sum a_i' w^i + (r - w^2) sum i a_i w^(i-1) is reduced modulo F.
    """
    n = len(coeffs) - 1
    K = r.K
    zero = _const(K, 0)
    D = [zero] * (n + 2)
    for i, a in enumerate(coeffs):
        D[i] = D[i] + a.diff()
        if i:
            D[i - 1] = D[i - 1] + r * a * i
            D[i + 1] = D[i + 1] - a * i
    lead = coeffs[n]
    for deg in range(n + 1, n - 1, -1):
        c = D[deg]
        if c.is_zero():
            continue
        q = c / lead
        for i in range(n + 1):
            D[deg - n + i] = D[deg - n + i] - q * coeffs[i]
    return all(x.is_zero() for x in D[:n])


@dataclass
class Certificate:
    case: int
    degree: int
    coefficients: list        # KRat coefficients of F(omega), lowest degree first
    verified: bool
    field: str

    def to_json(self) -> dict:
        return {"case": self.case, "degree": self.degree, "field": self.field,
                "verified": self.verified,
                "polynomial_in_omega": [str(sympy.factor(c.as_expr())) for c in self.coefficients]}


@dataclass
class KovacicResult:
    group: GaloisClass
    case: int | None
    certificate: Certificate | None
    riccati_solutions: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"sl2_class": self.group.name, "case": self.case,
                "certificate": self.certificate.to_json() if self.certificate else None,
                "riccati_solutions": [str(sympy.factor(w.as_expr())) for w in self.riccati_solutions],
                "notes": list(self.notes)}


# ---------------------------------------------------------------------------
# case 1
# ---------------------------------------------------------------------------

def _case1_local(K, rK, p: _Place):
    """Return list of options (sqrt_part: KRat, alpha, algebraic_ok) for the place."""
    half = K.one / 2
    zero = _const(K, 0)
    if p.at is not None:
        if p.order == 1:
            return [(zero, K.one)]
        if p.order == 2:
            v, c = _laurent(rK.num, rK.den, p.at, 1)
            sq = _sqrt_in(K, 1 + 4 * c[0])
            return [(zero, half + half * sq), (zero, half - half * sq)]
        nu = int(p.order) // 2
        v, c = _laurent(rK.num, rK.den, p.at, nu + 2)
        g = _sqrt_series(c, nu - 1, K)
        lin = _linear(K, p.at)
        sp = zero
        for j in range(nu - 1):
            sp = sp + KRat(Poly(g[j], Z, domain=K), lin ** (nu - j))
        diff = rK - sp * sp
        vd, cd = _laurent(diff.num, diff.den, p.at, 1) if not diff.is_zero() else (0, [K.zero])
        b = cd[(-nu - 1) - vd] if vd <= -nu - 1 else K.zero
        a = g[0]
        out = []
        for sgn in (1, -1):
            out.append((sp if sgn == 1 else -sp, half * (sgn * b / a + nu)))
        return out
    # infinity
    if p.order > 2:
        return [(zero, K.zero), (zero, K.one)]
    if p.order == 2:
        v, c = _laurent(rK.num, rK.den, None, 1)
        sq = _sqrt_in(K, 1 + 4 * c[0])
        return [(zero, half + half * sq), (zero, half - half * sq)]
    nu = -int(p.order) // 2
    v, c = _laurent(rK.num, rK.den, None, nu + 2)
    g = _sqrt_series(c, nu + 1, K)
    coeffs_high = g[:nu + 1]            # g_j multiplies z^(nu - j)
    sp = KRat(Poly(coeffs_high, Z, domain=K))
    diff = rK - sp * sp
    b = K.zero
    if not diff.is_zero():
        vd, cd = _laurent(diff.num, diff.den, None, nu + 2)
        idx = -(nu - 1) - vd
        if 0 <= idx < len(cd):
            b = cd[idx]
    a = g[0]
    return [(sp, half * (b / a - nu)), (-sp, half * (-b / a - nu))]


def _case1(K, rK, places):
    finite = [p for p in places if p.at is not None]
    inf = places[-1]
    local = [_case1_local(K, rK, p) for p in finite]
    local_inf = _case1_local(K, rK, inf)
    found = []          # (omega KRat, theta, alphas)
    full_space = None
    seen = set()
    for choice in product(*[range(len(o)) for o in local], range(len(local_inf))):
        fam = tuple(local[i][choice[i]] for i in range(len(finite)))
        sp_inf, a_inf = local_inf[choice[-1]]
        d = a_inf - sum((a for _, a in fam), K.zero)
        dd = _nonneg_int(K, d)
        if dd is None:
            continue
        key = (tuple((str(sp.num), str(sp.den), str(a)) for sp, a in fam), str(sp_inf.num), str(a_inf))
        if key in seen:
            continue
        seen.add(key)
        theta = sp_inf
        for (sp, a), p in zip(fam, finite):
            theta = theta + sp + KRat(Poly(a, Z, domain=K), _linear(K, p.at))
        coef = theta.diff() + theta * theta - rK

        def apply(P, theta=theta, coef=coef):
            return P.diff().diff() + theta * P.diff() * 2 + coef * P

        basis = _poly_solutions(K, apply, dd)
        if not basis:
            continue
        alphas = [a for _, a in fam]
        algebraic = all(sp.is_zero() for sp, _ in fam) and sp_inf.is_zero() and \
            all(as_rational(K, a) is not None for a in alphas)
        k = lcm(*[as_rational(K, a).denominator for a in alphas]) if algebraic and alphas else 1
        if len(basis) >= 2:
            full_space = (theta, basis, algebraic, k)
        for P in basis:
            Pk = KRat(P)
            omega = theta + Pk.diff() / Pk
            if all(omega != w for w, *_ in found):
                found.append((omega, algebraic, k))
    return found, full_space


def _classify_case1(found, full_space):
    if full_space is not None:
        _, _, algebraic, k = full_space
        if algebraic:
            return sl2(Tag.TRIVIAL) if k == 1 else sl2(Tag.FINITE_CYCLIC, k)
        return sl2(Tag.DIAGONAL_TORUS)
    omega, algebraic, k = found[0]
    if len(found) >= 2:
        if algebraic:
            return sl2(Tag.TRIVIAL) if k == 1 else sl2(Tag.FINITE_CYCLIC, k)
        return sl2(Tag.DIAGONAL_TORUS)
    if algebraic:
        return sl2(Tag.UNIPOTENT) if k == 1 else sl2(Tag.BOREL, k)
    return sl2(Tag.BOREL)


# ---------------------------------------------------------------------------
# case 2
# ---------------------------------------------------------------------------

def _b_coeff(K, rK, p):
    v, c = _laurent(rK.num, rK.den, p.at, 1)
    return c[0]


def _case2_sets(K, rK, p):
    if p.at is not None:
        if p.order == 1:
            return [4]
        if p.order == 2:
            sq = _sqrt_in(K, 1 + 4 * _b_coeff(K, rK, p))
            vals = [K.convert(2), 2 + 2 * sq, 2 - 2 * sq]
            return sorted({v for v in (_int(K, x) for x in vals) if v is not None})
        return [int(p.order)]
    if p.order > 2:
        return [0, 2, 4]
    if p.order == 2:
        sq = _sqrt_in(K, 1 + 4 * _b_coeff(K, rK, p))
        vals = [K.convert(2), 2 + 2 * sq, 2 - 2 * sq]
        return sorted({v for v in (_int(K, x) for x in vals) if v is not None})
    return [int(p.order)]


def _case2(K, rK, places):
    finite = [p for p in places if p.at is not None]
    sets = [_case2_sets(K, rK, p) for p in finite]
    sets_inf = _case2_sets(K, rK, places[-1])
    for fam in product(*sets, sets_inf):
        e_inf = fam[-1]
        tot = e_inf - sum(fam[:-1])
        if tot < 0 or tot % 2:
            continue
        d = tot // 2
        theta = _const(K, 0)
        for e, p in zip(fam[:-1], finite):
            if e:
                theta = theta + KRat(Poly(K.convert(Rational(e, 2)), Z, domain=K), _linear(K, p.at))
        th1 = theta.diff()
        th2 = th1.diff()
        r1 = rK.diff()
        c2 = theta * 3
        c1 = theta * theta * 3 + th1 * 3 - rK * 4
        c0 = th2 + theta * th1 * 3 + theta * theta * theta - rK * theta * 4 - r1 * 2

        def apply(P):
            P1 = P.diff()
            P2 = P1.diff()
            return P2.diff() + c2 * P2 + c1 * P1 + c0 * P

        basis = _poly_solutions(K, apply, d)
        if basis:
            P = KRat(basis[0])
            phi = theta + P.diff() / P
            return phi
    return None


def _dihedral_order(K, rK, phi):
    """Order k2 of y1/y2's character, or None when infinite.  Raises Undecidable for genus > 0."""
    R = rK * 4 - phi.diff() * 2 - phi * phi
    N, D = R.num, R.den
    factors = D.factor_list()[1]
    # sqrt(R) dz needs at worst simple poles: R may have double poles, nothing worse
    if any(m >= 3 for _, m in factors):
        return None
    res_dens = []
    for g, m in factors:
        if m == 2:
            cof = D.quo(g ** 2)
            # (z - c)^2 R at a root c of g equals N / (cof g'^2) there
            h = (N * (cof * g.diff() ** 2).invert(g)).rem(g)
            if h.degree() > 0:
                return None
            hv = as_rational(K, _lc(h))
            if hv is None:
                return None
            sq = _rational_sqrt(hv)
            if sq is None:
                return None
            res_dens.append(sq.denominator)
    # infinity: order of R there
    k_inf = D.degree() - N.degree()
    if k_inf < 2:
        return None
    if k_inf == 2:
        hv = as_rational(K, _lc(N) / _lc(D))
        sq = _rational_sqrt(hv) if hv is not None else None
        if sq is None:
            return None
        res_dens.append(sq.denominator)
    # genus of w^2 = R
    odd = Poly(1, Z, domain=K)
    for g, m in (N * D).sqf_list()[1]:
        if m % 2:
            odd = odd * g
    if odd.degree() > 2:
        raise Undecidable("finiteness of the dihedral group needs a torsion test on a curve of positive genus",
                          branch_degree=odd.degree())
    return lcm(*res_dens) if res_dens else 1


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = sympy.integer_nthroot(a, 2), sympy.integer_nthroot(b, 2)
    if ra[1] and rb[1]:
        return Fraction(ra[0], rb[0])
    return None


# ---------------------------------------------------------------------------
# case 3
# ---------------------------------------------------------------------------

def _case3(K, rK, places, n):
    finite = [p for p in places if p.at is not None]
    inf = places[-1]
    sets = []
    for p in finite:
        if p.order == 1:
            sets.append([12])
        else:
            sq = _sqrt_in(K, 1 + 4 * _b_coeff(K, rK, p))
            vals = {_int(K, 6 + K.convert(Rational(12 * k, n)) * sq) for k in range(-n // 2, n // 2 + 1)}
            sets.append(sorted(v for v in vals if v is not None))
    if inf.order > 2:
        vals = {Rational(6) + Rational(12 * k, n) for k in range(-n // 2, n // 2 + 1)}
        set_inf = sorted(int(v) for v in vals if v.is_integer)
    else:
        sq = _sqrt_in(K, 1 + 4 * _b_coeff(K, rK, inf))
        vals = {_int(K, 6 + K.convert(Rational(12 * k, n)) * sq) for k in range(-n // 2, n // 2 + 1)}
        set_inf = sorted(v for v in vals if v is not None)
    S = Poly(1, Z, domain=K)
    for p in finite:
        S = S * _linear(K, p.at)
    S1 = S.diff(Z)
    U = KRat(S * S) * rK                 # S^2 r is a polynomial (poles of r have order <= 2)
    assert U.den.degree() == 0
    U = U.num.quo_ground(_lc(U.den))
    for fam in product(*sets, set_inf):
        tot = Fraction(n, 12) * (fam[-1] - sum(fam[:-1]))
        if tot.denominator != 1 or tot < 0:
            continue
        d = int(tot)
        T = Poly(0, Z, domain=K)             # S * theta
        for e, p in zip(fam[:-1], finite):
            T = T + S.quo(_linear(K, p.at)).mul_ground(K.convert(Rational(n * e, 12)))

        def chain(P):
            Ps = {n: -P, n + 1: Poly(0, Z, domain=K)}
            for i in range(n, -1, -1):
                Ps[i - 1] = (-S * Ps[i].diff(Z) + (S1 * (n - i) - T) * Ps[i]
                             - U * Ps[i + 1] * ((n - i) * (i + 1)))
            return Ps

        basis = _poly_solutions(K, lambda P: chain(P.num)[-1], d)
        if basis:
            Ps = chain(basis[0])
            return [KRat(S ** i * Ps[i]) * Fraction(1, factorial(n - i)) for i in range(n + 1)]
    return None


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def _to_sympy_r(r):
    if isinstance(r, RatExpr):
        if r.chart.parameters and r.free_symbols & set(r.chart.parameters):
            raise ValueError("kovacic needs numeric rational coefficients")
        if r.chart.tower_names and r.free_symbols & set(r.chart.tower_names):
            raise ValueError("kovacic needs a rational function, not a tower element")
        e = r.to_sympy()
        vs = [v for v in r.chart.variables if v in r.free_symbols]
        if len(vs) > 1:
            raise ValueError("r must depend on one variable")
        if vs:
            e = e.subs(sympy.Symbol(vs[0]), Z)
        return e
    if isinstance(r, str):
        from ..expr import Chart
        return _to_sympy_r(Chart(("z",))(r))
    e = sympy.sympify(r)
    free = e.free_symbols
    if len(free) > 1:
        raise ValueError("r must depend on one variable")
    if free:
        e = e.subs(next(iter(free)), Z)
    return e


def kovacic(r) -> KovacicResult:
    """Classify the Galois group of y'' = r y (r in Q(z)) inside SL2."""
    expr = _to_sympy_r(r)
    K, rK, places = _setup(expr)
    finite = [p for p in places if p.at is not None]
    o_inf = places[-1].order
    field_name = "QQ" if K.is_QQ else str(K)
    notes = []

    c1 = all(p.order == 1 or p.order % 2 == 0 for p in finite) and (o_inf > 2 or o_inf % 2 == 0)
    c2 = any(p.order == 2 or (p.order > 2 and p.order % 2 == 1) for p in finite)
    c3 = all(p.order <= 2 for p in finite) and o_inf >= 2

    if c1:
        found, full_space = _case1(K, rK, places)
        if found:
            omegas = [w for w, *_ in found]
            ok = all(_riccati_check([-w, _const(K, 1)], rK) for w in omegas)
            if not ok:
                raise AssertionError("case 1 certificate failed verification")
            cert = Certificate(1, 1, [-omegas[0], _const(K, 1)], ok, field_name)
            return KovacicResult(_classify_case1(found, full_space), 1, cert, omegas, notes)
    if c2:
        phi = _case2(K, rK, places)
        if phi is not None:
            half = K.one / 2
            coeffs = [phi.diff() * half + phi * phi * half - rK, -phi, _const(K, 1)]
            ok = _riccati_check(coeffs, rK)
            if not ok:
                raise AssertionError("case 2 certificate failed verification")
            k2 = _dihedral_order(K, rK, phi)
            group = sl2(Tag.DIHEDRAL_INFINITE) if k2 is None else sl2(Tag.DIHEDRAL_FINITE, 4 * k2)
            return KovacicResult(group, 2, Certificate(2, 2, coeffs, ok, field_name), [], notes)
    if c3:
        for n, tag in ((4, Tag.TETRAHEDRAL), (6, Tag.OCTAHEDRAL), (12, Tag.ICOSAHEDRAL)):
            coeffs = _case3(K, rK, places, n)
            if coeffs is not None:
                ok = _riccati_check(coeffs, rK)
                if not ok:
                    raise AssertionError(f"case 3 (n={n}) certificate failed verification")
                return KovacicResult(sl2(tag), 3, Certificate(3, n, coeffs, ok, field_name), [], notes)
    return KovacicResult(sl2(Tag.FULL), None, None, [], notes)
