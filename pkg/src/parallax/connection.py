"""Linear connections written in a frame.

A :class:`FrameConnection` stores Christoffel symbols relative to a frame
X_1..X_r: nabla_{X_i} X_j = sum_k gamma[i][j][k] X_k.  The structure functions
c_ij^k of the frame ([X_i, X_j] = sum_k c_ij^k X_k) enter torsion, curvature
and the reciprocal connection.  Indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .errors import ChartMismatch, InitialConditionMismatch
from .expr import Chart, RatExpr, compose
from .geometry import VectorField, lie_bracket
from .liealg import StructureConstants
from .parallelism import Frame, infer_structure_constants


def _zeros3(r, zero):
    return [[[zero] * r for _ in range(r)] for _ in range(r)]


class FrameConnection:
    def __init__(self, frame: Frame, gamma, kind: str = "general"):
        self.frame = frame
        chart = frame.chart
        r = frame.dim
        self.gamma = tuple(tuple(tuple(chart.coerce(gamma[i][j][k]) for k in range(r))
                                 for j in range(r)) for i in range(r))
        self.kind = kind

    @property
    def chart(self) -> Chart:
        return self.frame.chart

    @property
    def dim(self) -> int:
        return self.frame.dim

    @cached_property
    def c(self):
        return self.frame.structure_functions()

    def lift(self, chart: Chart) -> "FrameConnection":
        if chart == self.chart:
            return self
        frame = Frame(chart, [X.lift(chart) for X in self.frame.fields])
        g = [[[x.lift(chart) for x in b] for b in a] for a in self.gamma]
        return FrameConnection(frame, g, self.kind)

    # covariant derivatives --------------------------------------------------------

    def nabla_components(self, i: int, y):
        """Frame components of nabla_{X_i} Y for Y = sum_j y[j] X_j."""
        r = self.dim
        X = self.frame.fields[i]
        out = [X(y[k]) for k in range(r)]
        for j in range(r):
            if not y[j]:
                continue
            for k in range(r):
                g = self.gamma[i][j][k]
                if g:
                    out[k] = out[k] + y[j] * g
        return out

    def nabla(self, Z: VectorField, Y: VectorField) -> VectorField:
        """nabla_Z Y as a vector field."""
        z = self.frame.components(Z)
        y = self.frame.components(Y)
        total = [self.chart.zero] * self.dim
        for i in range(self.dim):
            if z[i]:
                comp = self.nabla_components(i, y)
                total = [t + z[i] * v for t, v in zip(total, comp)]
        return self.frame.combine(total)

    def nonzero(self):
        r = self.dim
        return {(i, j, k): self.gamma[i][j][k] for i, j, k in product(range(r), repeat=3)
                if self.gamma[i][j][k]}

    def __eq__(self, other):
        return isinstance(other, FrameConnection) and self.frame == other.frame and \
            self.gamma == other.gamma

    def __hash__(self):
        return hash(self.gamma)

    def to_json(self) -> dict:
        return {"frame": self.frame.to_json(),
                "christoffel": [{"i": i + 1, "j": j + 1, "k": k + 1, "value": str(v)}
                                for (i, j, k), v in sorted(self.nonzero().items())]}

    def __repr__(self):
        items = ", ".join(f"G{i+1}{j+1}^{k+1}={v}" for (i, j, k), v in sorted(self.nonzero().items()))
        return f"FrameConnection({items or 'all zero'})"


def associated_connection(F: Frame) -> FrameConnection:
    """The connection for which the frame is parallel: all Christoffels vanish."""
    F.inverse_matrix()  # raises SingularFrame
    return FrameConnection(F, _zeros3(F.dim, F.chart.zero), kind="associated")


def reciprocal(C: FrameConnection) -> FrameConnection:
    """nabla'_X Y = nabla_Y X + [X, Y]: gamma'_ij^k = gamma_ji^k + c_ij^k."""
    r = C.dim
    g = [[[C.gamma[j][i][k] + C.c[i][j][k] for k in range(r)] for j in range(r)] for i in range(r)]
    kind = {"associated": "reciprocal", "reciprocal": "associated"}.get(C.kind, "general")
    return FrameConnection(C.frame, g, kind)


def change_frame(C: FrameConnection, G: Frame) -> FrameConnection:
    """Re-express C in another frame of the same chart."""
    if G.chart != C.chart:
        if G.chart.contains(C.chart):
            C = C.lift(G.chart)
        else:
            raise ChartMismatch("new frame lives on another chart")
    G.inverse_matrix()
    r = C.dim
    P = [C.frame.components(Z) for Z in G.fields]  # Z_a = sum_i P[a][i] X_i
    Ginv = G.inverse_matrix()
    g = _zeros3(r, C.chart.zero)
    for b in range(r):
        y = P[b]
        derivs = [C.nabla_components(i, y) for i in range(r)]
        for a in range(r):
            comp = [sum((P[a][i] * derivs[i][k] for i in range(r) if P[a][i]), C.chart.zero)
                    for k in range(r)]
            vec = C.frame.combine(comp).coeffs
            for c in range(r):
                g[a][b][c] = sum((Ginv[c][m] * vec[m] for m in range(r)), C.chart.zero)
    return FrameConnection(G, g, C.kind)


def to_coordinates(C: FrameConnection) -> FrameConnection:
    return change_frame(C, Frame.coordinate(C.chart))


# tensors ----------------------------------------------------------------------------

def torsion(C: FrameConnection):
    """T[i][j][k] = gamma_ij^k - gamma_ji^k - c_ij^k."""
    r = C.dim
    return [[[C.gamma[i][j][k] - C.gamma[j][i][k] - C.c[i][j][k] for k in range(r)]
             for j in range(r)] for i in range(r)]


def curvature(C: FrameConnection):
    """R[i][j][k][l]: R(X_i, X_j) X_k = sum_l R_ijk^l X_l."""
    r = C.dim
    G = C.gamma
    c = C.c
    X = C.frame.fields
    zero = C.chart.zero
    R = [[[[zero] * r for _ in range(r)] for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            for k in range(r):
                for l in range(r):
                    v = X[i](G[j][k][l]) - X[j](G[i][k][l])
                    for m in range(r):
                        v = v + G[j][k][m] * G[i][m][l] - G[i][k][m] * G[j][m][l] - c[i][j][m] * G[m][k][l]
                    R[i][j][k][l] = v
                    R[j][i][k][l] = -v
    return R


def nabla_torsion(C: FrameConnection):
    """D[i][j][k][l] = (nabla_{X_i} T)(X_j, X_k) on X_l."""
    r = C.dim
    T = torsion(C)
    G = C.gamma
    X = C.frame.fields
    zero = C.chart.zero
    D = [[[[zero] * r for _ in range(r)] for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            for k in range(j + 1, r):
                for l in range(r):
                    v = X[i](T[j][k][l])
                    for m in range(r):
                        v = v + T[j][k][m] * G[i][m][l] - G[i][j][m] * T[m][k][l] - G[i][k][m] * T[j][m][l]
                    D[i][j][k][l] = v
                    D[i][k][j][l] = -v
    return D


def _first_nonzero(tensor, depth):
    def walk(t, idx):
        if len(idx) == depth:
            return (idx, t) if t else None
        for n, sub in enumerate(t):
            hit = walk(sub, idx + (n,))
            if hit:
                return hit
        return None
    return walk(tensor, ())


@dataclass
class LieConnectionReport:
    flat: bool
    constant_torsion: bool
    reciprocal_flat: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def flat_and_constant_torsion(self) -> bool:
        return self.flat and self.constant_torsion

    @property
    def both_flat(self) -> bool:
        return self.flat and self.reciprocal_flat

    @property
    def equivalence_holds(self) -> bool:
        return self.flat_and_constant_torsion == self.both_flat

    @property
    def is_lie_connection(self) -> bool:
        return self.flat_and_constant_torsion and self.both_flat

    def to_json(self) -> dict:
        return {"flat": self.flat, "constant_torsion": self.constant_torsion,
                "reciprocal_flat": self.reciprocal_flat,
                "flat_and_constant_torsion": self.flat_and_constant_torsion,
                "both_flat": self.both_flat, "equivalence_holds": self.equivalence_holds,
                "lie_connection": self.is_lie_connection,
                "witnesses": self.witnesses}


def lie_connection_report(C: FrameConnection) -> LieConnectionReport:
    R = curvature(C)
    D = nabla_torsion(C)
    Rr = curvature(reciprocal(C))
    wit = {}
    for name, t, depth in (("curvature", R, 4), ("nabla_torsion", D, 4), ("reciprocal_curvature", Rr, 4)):
        hit = _first_nonzero(t, depth)
        if hit:
            idx, val = hit
            wit[name] = {"index": [n + 1 for n in idx], "value": str(val)}
    return LieConnectionReport("curvature" not in wit, "nabla_torsion" not in wit,
                               "reciprocal_curvature" not in wit, wit)


# adjoint connection ------------------------------------------------------------------

class AdjointConnection:
    """nabla_{X_i} A_j = [A_i, A_j] on the trivial bundle M x g.

    ``gamma[i][j][k] = lambda_ij^k``: i runs over base directions (the
    parallelism frame X_i), j and k over the constant basis A_1..A_r.
    """

    def __init__(self, algebra: StructureConstants, frame: Frame | None = None):
        self.algebra = algebra
        self.frame = frame
        self.gamma = algebra.lam

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def nabla_section(self, i: int, v):
        """nabla_{X_i} of the section sum_j v[j] A_j (component list)."""
        r = self.dim
        if self.frame is not None:
            chart = self.frame.chart
            v = [chart.coerce(x) for x in v]
            out = [self.frame.fields[i](x) for x in v]
        else:
            chart = self.algebra.chart
            v = [chart.coerce(x) for x in v]
            for x in v:
                if not x.is_constant:
                    raise ValueError("a base frame is needed to differentiate non-constant sections")
            out = [chart.zero] * r
        for j in range(r):
            if v[j]:
                for k in range(r):
                    if self.gamma[i][j][k]:
                        out[k] = out[k] + v[j] * self.gamma[i][j][k]
        return out

    def __repr__(self):
        return f"AdjointConnection({self.algebra!r})"


def adjoint_connection(lam: StructureConstants, frame: Frame | None = None) -> AdjointConnection:
    return AdjointConnection(lam, frame)


# horizontal sections ----------------------------------------------------------------------

@dataclass
class HorizontalReport:
    ok: bool
    residuals: list          # per frame direction: frame components of nabla_{X_i} Y
    bracket_residuals: list | None = None  # [X_i, Y] when C is a reciprocal of a parallelism

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"horizontal": self.ok,
               "residuals": [[str(x) for x in r] for r in self.residuals]}
        if self.bracket_residuals is not None:
            out["bracket_residuals"] = [[str(x) for x in r] for r in self.bracket_residuals]
        return out


def _common_chart(charts):
    best = charts[0]
    for c in charts[1:]:
        if c.contains(best):
            best = c
        elif not best.contains(c):
            raise ChartMismatch("fields live on incompatible charts", left=repr(best), right=repr(c))
    return best


def verify_horizontal(C: FrameConnection, Y: VectorField) -> HorizontalReport:
    """Exact check of nabla_{X_i} Y = 0 for every frame direction."""
    chart = _common_chart([C.chart, Y.chart])
    C = C.lift(chart)
    Y = Y.lift(chart)
    y = C.frame.components(Y)
    residuals = [C.nabla_components(i, y) for i in range(C.dim)]
    ok = not any(x for r in residuals for x in r)
    brackets = None
    if C.kind == "reciprocal":
        brackets = [list(lie_bracket(X, Y).coeffs) for X in C.frame.fields]
        if ok != (not any(x for r in brackets for x in r)):
            raise AssertionError("covariant and bracket criteria disagree")
    return HorizontalReport(ok, residuals, brackets)


def evaluate_at(f: RatExpr, values: dict) -> RatExpr:
    """Substitute exact values for variables and tower elements."""
    target = f.chart.constants()
    return compose(f, values, target)


@dataclass
class BracketReport:
    ok: bool
    structure_constants: StructureConstants
    checks: list  # (i, j, holds, residual coefficients)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "checks": [{"pair": [i + 1, j + 1], "holds": h, "residual": [str(x) for x in res]}
                           for i, j, h, res in self.checks]}


def opposite_initial_brackets(F: Frame, Ys, point: dict, tower_values: dict | None = None) -> BracketReport:
    """Verify [Y_i, Y_j] = -sum_k lambda_ij^k Y_k for horizontal fields Y_i with Y_i(p) = X_i(p)."""
    lam = infer_structure_constants(F)
    chart = _common_chart([F.chart] + [Y.chart for Y in Ys])
    Ys = [Y.lift(chart) for Y in Ys]
    values = dict(point)
    values.update(tower_values or {})
    rec = reciprocal(associated_connection(F))
    for i, (Y, X) in enumerate(zip(Ys, F.fields)):
        for a in range(chart.dim):
            yv = evaluate_at(Y.coeffs[a], values)
            xv = evaluate_at(X.coeffs[a].lift(chart), values)
            if yv != xv:
                raise InitialConditionMismatch(
                    f"Y{i+1} and X{i+1} differ at the base point",
                    field=i + 1, component=a + 1, y_value=str(yv), x_value=str(xv))
        rep = verify_horizontal(rec, Y)
        if not rep.ok:
            raise InitialConditionMismatch(f"Y{i+1} is not horizontal for the reciprocal connection",
                                           field=i + 1,
                                           residuals=[[str(x) for x in r] for r in rep.residuals])
    checks = []
    r = len(Ys)
    for i in range(r):
        for j in range(i + 1, r):
            br = lie_bracket(Ys[i], Ys[j])
            target = VectorField(chart, [0] * chart.dim)
            for k in range(r):
                if lam.lam[i][j][k]:
                    target = target - Ys[k].scale(lam.lam[i][j][k].lift(chart.constants()))
            res = (br - target).coeffs
            checks.append((i, j, not any(res), list(res)))
    return BracketReport(all(h for _, _, h, _ in checks), lam, checks)
