"""Second symmetric power: of matrices and of the operator y'' = r y."""

from __future__ import annotations

from ..errors import SingularMatrix
from ..expr import Chart, RatExpr
from .ode import LinearODE


def sym2_matrix(M):
    """Action of M on the basis (e1^2, e1 e2, e2^2) of Sym^2.

    Columns are the images of e1^2, e1e2, e2^2 when M e1 = p e1 + r e2 and
    M e2 = q e1 + s e2 (M = [[p, q], [r, s]]).
    """
    (p, q), (r, s) = M
    if not (p * s - q * r):
        raise SingularMatrix("sym2 is only a group map on invertible matrices")
    cols = [(p * p, 2 * p * r, r * r),
            (p * q, p * s + q * r, r * s),
            (q * q, 2 * q * s, s * s)]
    return [[cols[j][i] for j in range(3)] for i in range(3)]


def symmetric_square(L: LinearODE) -> LinearODE:
    """y'' = r y  ->  a''' - 4 r a' - 2 r' a = 0."""
    r = L.potential()
    return LinearODE(r.chart, [-2 * r.derive(L.var), -4 * r, r.chart.zero], L.var, "a")


def verify_symmetric_square(L: LinearODE, S: LinearODE | None = None) -> list[RatExpr]:
    """Residuals of S on y1^2, y1 y2, y2^2 where y1, y2 are formal solutions of L.

    The solutions are modelled by a tower (y1, y1', y2, y2') with
    y_i'' = r y_i; every residual is exactly zero when S is right.
    """
    if S is None:
        S = symmetric_square(L)
    r = L.potential()
    v = L.var
    rt = str(r)
    base = r.chart.empty_tower()
    tower = base.extend_system(("y1", "w1"), {"y1": {v: "w1"}, "w1": {v: f"({rt})*y1"}})
    tower = tower.extend_system(("y2", "w2"), {"y2": {v: "w2"}, "w2": {v: f"({rt})*y2"}})
    chart = tower.chart
    Sc = LinearODE(chart, [c.lift(chart) for c in S.coeffs], v, S.unknown)
    out = []
    for expr in ("y1*y1", "y1*y2", "y2*y2"):
        a = chart(expr)
        derivs = [a]
        for _ in range(S.order):
            derivs.append(derivs[-1].derive(v))
        out.append(Sc.apply(derivs))
    return out
