"""Truncated arcs of the affine line, the Schwarzian ideal and the sl2 frame.

Jet coordinates are ``z0, z1, ..., zk`` (z_i stands for the i-th derivative
of an arc).  A rational potential nu is given in the variable ``z`` and is
evaluated at ``z0``.  Passing ``nu=None`` makes nu a formal function: the
jet chart then carries tower elements ``nu0, nu1, ...`` with
d/dz0 nu_i = nu_{i+1}.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

from .errors import EliminationFailure, OrderTooSmall
from .expr import Chart, ConstField, RatExpr, compose, linalg
from .galois.ode import LinearODE
from .geometry import VectorField, lie_bracket
from .parallelism import Frame

NU_ORDER = 4        # formal derivatives of a symbolic nu carried by jet charts
SYMBOLIC = None


@lru_cache(maxsize=None)
def jet_chart(order: int, params: tuple = (), symbolic_nu: bool = False,
              extra: tuple = ()) -> Chart:
    """Chart z0..z<order>; ``extra`` lists formal functions (name, order) of z0."""
    chart = Chart(tuple(f"z{i}" for i in range(order + 1)), ConstField(tuple(params)))
    if symbolic_nu:
        chart = chart.formal_function("nu", "z0", NU_ORDER)
    for name, k in extra:
        chart = chart.formal_function(name, "z0", k)
    return chart


def line_chart(params: tuple = (), symbolic_nu: bool = False) -> Chart:
    chart = Chart(("z",), ConstField(tuple(params)))
    if symbolic_nu:
        chart = chart.formal_function("nu", "z", NU_ORDER)
    return chart


def _jet_order(chart: Chart) -> int:
    return len(chart.variables) - 1


def _layout(chart: Chart):
    """(params, symbolic_nu, extra) of a jet chart built by :func:`jet_chart`."""
    names = chart.tower_names
    symbolic = "nu0" in names
    extra = []
    if chart.tower is not None:
        for b in chart.tower.blocks:
            for n in b.names:
                base = n.rstrip("0123456789")
                if base != "nu" and not any(e[0] == base for e in extra):
                    idx = [int(m[len(base):]) for m in names if m.rstrip("0123456789") == base]
                    extra.append((base, max(idx)))
    return tuple(chart.parameters), symbolic, tuple(extra)


def resize(f: RatExpr, order: int) -> RatExpr:
    """Move an expression to the jet chart of another order (same parameters/towers)."""
    params, symbolic, extra = _layout(f.chart)
    return compose(f, {}, jet_chart(order, params, symbolic, extra))


def coerce_nu(nu, params=()) -> RatExpr | None:
    """Normalise nu to an expression on the line chart (``z``), or None if symbolic."""
    if nu is None or (isinstance(nu, str) and nu.strip() in ("nu", "symbolic")):
        return None
    if isinstance(nu, RatExpr):
        chart = nu.chart
        if chart.dim > 1 or chart.tower is not None:
            raise ValueError("nu must be a rational function of one variable")
        target = line_chart(tuple(chart.parameters))
        if chart.dim == 1 and chart.variables[0] != "z":
            return compose(nu, {chart.variables[0]: target.symbol("z")}, target)
        return compose(nu, {}, target)
    return line_chart(tuple(params)).coerce(nu)


def nu_on(chart: Chart, nu: RatExpr | None) -> RatExpr:
    """nu(z0) on a jet chart."""
    if nu is None:
        return chart.symbol("nu0")
    return compose(nu, {"z": chart.symbol("z0")}, chart)


# ---------------------------------------------------------------------------

class JetField(VectorField):
    """Order-k truncation: coefficients of d/dz0..d/dzk.

    The coefficients may mention z_{k+1} (e.g. E_-1), so they live on the
    jet chart of order k+1; the field itself never has a d/dz_{k+1} part.
    """

    def __init__(self, chart: Chart, coeffs, order: int):
        coeffs = list(coeffs) + [0] * (chart.dim - len(coeffs))
        super().__init__(chart, coeffs)
        self.order = order

    def restrict(self, order: int) -> "JetField":
        if order > self.order:
            raise OrderTooSmall("cannot restrict to a higher order", order=order)
        return JetField(self.chart, self.coeffs[:order + 1], order)

    def on_chart(self, chart: Chart) -> "JetField":
        return JetField(chart, [compose(c, {}, chart) for c in self.coeffs[:self.order + 1]],
                        self.order)

    def components(self):
        return list(self.coeffs[:self.order + 1])

    def __repr__(self):
        terms = [f"({c})*d/dz{i}" for i, c in enumerate(self.components()) if c]
        return "JetField(" + (" + ".join(terms) or "0") + ")"


def witt_prolong(m: int, k: int, chart: Chart | None = None) -> JetField:
    """Order-k truncation of E_m = sum_i i!/(i-m-1)! z_{i-m} d/dz_i."""
    if m < -1:
        raise ValueError("E_m is defined for m >= -1")
    if k < max(m + 1, 0):
        raise OrderTooSmall(f"E_{m} has no component below order {m + 1}", m=m, order=k)
    if chart is None:
        chart = jet_chart(k + 1)
    elif _jet_order(chart) < k + (1 if m == -1 else 0):
        raise OrderTooSmall("chart order too small for this truncation", order=_jet_order(chart))
    coeffs = []
    for i in range(k + 1):
        if i - m - 1 < 0:
            coeffs.append(0)
        else:
            coeffs.append(chart.symbol(f"z{i - m}") * (factorial(i) // factorial(i - m - 1)))
    return JetField(chart, coeffs, k)


def jet_bracket(P: JetField, Q: JetField) -> JetField:
    """Bracket of two truncations (components 0..order)."""
    k = min(P.order, Q.order)
    return JetField(P.chart, lie_bracket(P, Q).coeffs[:k + 1], k)


def total_derivative(g: RatExpr) -> RatExpr:
    """E_-1 . g; the result lives on the jet chart one order higher."""
    k = _jet_order(g.chart)
    h = resize(g, k + 1)
    chart = h.chart
    out = chart.zero
    for i in range(k + 1):
        d = h.derive(f"z{i}")
        if d:
            out = out + chart.symbol(f"z{i + 1}") * d
    return out


def apply_field(X: JetField, g: RatExpr) -> RatExpr:
    g = compose(g, {}, X.chart) if g.chart != X.chart else g
    return X(g)


def schwarzian_f(nu=SYMBOLIC, params=(), chart: Chart | None = None) -> RatExpr:
    """f = z3/z1 - 3/2 (z2/z1)^2 + nu(z0) z1^2 on the order-3 jet chart."""
    nu = coerce_nu(nu, params)
    if chart is None:
        chart = jet_chart(3, tuple(nu.chart.parameters) if nu is not None else tuple(params),
                          nu is None)
    z1, z2, z3 = (chart.symbol(f"z{i}") for i in (1, 2, 3))
    half3 = chart.const(3) / 2
    return z3 / z1 - half3 * (z2 / z1) ** 2 + nu_on(chart, nu) * z1 ** 2


def ideal_identities(nu=SYMBOLIC, params=()):
    """Return (E0.f - 2f, E1.f) on the order-3 chart; both vanish identically."""
    f = schwarzian_f(nu, params)
    E0 = witt_prolong(0, 3, f.chart)
    E1 = witt_prolong(1, 3, f.chart)
    return E0(f) - 2 * f, E1(f)


def sl2_frame(nu=SYMBOLIC, params=()) -> Frame:
    """The rational sl2-parallelism (E_-1, E_0, E_1) restricted to the threefold f = 0."""
    nu = coerce_nu(nu, params)
    pars = tuple(nu.chart.parameters) if nu is not None else tuple(params)
    f = schwarzian_f(nu, pars)
    a = f.partial("z3")
    rest = compose(f, {"z3": 0}, f.chart)
    if not a or a.partial("z3") or (f - rest - a * f.chart.symbol("z3")):
        raise EliminationFailure("f is not linear in z3")
    z3 = -rest / a
    C3 = jet_chart(2, pars, nu is None)
    z3 = compose(z3, {}, C3)
    z1, z2 = C3.symbol("z1"), C3.symbol("z2")
    displayed = -nu_on(C3, nu) * z1 ** 3 + (C3.const(3) / 2) * z2 ** 2 / z1
    if z3 != displayed:
        raise EliminationFailure("solved z3 disagrees with the closed form", solved=str(z3),
                                 expected=str(displayed))
    Em1 = VectorField(C3, [z1, z2, z3])
    E0 = VectorField(C3, [0, z1, 2 * z2])
    E1 = VectorField(C3, [0, 0, 2 * z1])
    return Frame(C3, [Em1, E0, E1])


def prolonged_symmetry(chart: Chart) -> VectorField:
    """a d/dz0 + a' z1 d/dz1 + (a'' z1^2 + a' z2) d/dz2 with formal a0..a3."""
    a0, a1, a2 = (chart.symbol(f"a{i}") for i in range(3))
    z1, z2 = chart.symbol("z1"), chart.symbol("z2")
    return VectorField(chart, [a0, a1 * z1, a2 * z1 ** 2 + a1 * z2])


def _coefficients_in(f: RatExpr, names) -> list[RatExpr]:
    """Coefficients of the numerator of f as a polynomial in ``names``."""
    chart = f.chart
    idx = [chart.symbols.index(n) for n in names]
    K = chart.domain
    groups = {}
    for mon, c in f._f.numer.terms():
        key = tuple(mon[i] for i in idx)
        rest = list(mon)
        for i in idx:
            rest[i] = 0
        term = K.ring.term_new(tuple(rest), c)
        groups[key] = groups.get(key, K.ring.zero) + term
    return [RatExpr(chart, K(p)) for _, p in sorted(groups.items())]


def derive_symmetry_ode(nu=SYMBOLIC, params=()) -> LinearODE:
    """Eliminate the jet variables from [X, L] = 0 for the three sl2 frame fields.

    Returns the monic third-order equation satisfied by the coefficient a(z)
    of an infinitesimal symmetry.
    """
    nu = coerce_nu(nu, params)
    pars = tuple(nu.chart.parameters) if nu is not None else tuple(params)
    frame = sl2_frame(nu, pars)
    chart = jet_chart(2, pars, nu is None, (("a", 3),))
    L = prolonged_symmetry(chart)
    unknowns = [f"a{i}" for i in range(4)]
    rows = []
    for X in frame.fields:
        X = X.lift(chart) if X.chart != chart else X
        br = lie_bracket(X, L)
        for comp in br.coeffs:
            if not comp:
                continue
            for coeff in _coefficients_in(comp, ("z1", "z2")):
                row = [coeff.partial(u) for u in unknowns]
                residue = coeff - sum((r * chart.symbol(u) for r, u in zip(row, unknowns)), chart.zero)
                if residue or any(r.free_symbols & set(unknowns) for r in row):
                    raise EliminationFailure("commutation conditions are not linear in a",
                                             condition=str(coeff))
                if any(row):
                    rows.append(row)
    if not rows:
        raise EliminationFailure("no conditions produced")
    R, piv = linalg.rref(rows)
    if len(piv) != 1:
        raise EliminationFailure(f"expected a single relation, found rank {len(piv)}",
                                 rank=len(piv))
    rel = R[0]
    if not rel[3]:
        raise EliminationFailure("relation does not involve a'''")
    rel = [x / rel[3] for x in rel]
    target = line_chart(pars, nu is None)
    coeffs = []
    for x in rel[:3]:
        if x.free_symbols & {"z1", "z2"}:
            raise EliminationFailure("coefficient still depends on jet variables", coefficient=str(x))
        coeffs.append(compose(x, {"z0": target.symbol("z")}, target))
    return LinearODE(target, coeffs, "z", "a")


def expected_lin(nu=SYMBOLIC, params=()) -> LinearODE:
    """a''' + 2 nu a' + nu' a = 0 written directly (used only as an oracle)."""
    nu = coerce_nu(nu, params)
    if nu is None:
        chart = line_chart(tuple(params), True)
        n0, n1 = chart.symbol("nu0"), chart.symbol("nu1")
        return LinearODE(chart, [n1, 2 * n0, 0], "z", "a")
    return LinearODE(nu.chart, [nu.derive("z"), 2 * nu, 0], "z", "a")
