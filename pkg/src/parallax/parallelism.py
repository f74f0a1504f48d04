"""Frames, coframes, Maurer-Cartan checks, isogeny pullbacks and commuting pairs."""

from __future__ import annotations

import sympy

from .errors import (NonCommutingParallelisms, NonConstantCoefficients, NotAnAutomorphism,
                     NotClosed, SingularFrame, SingularMatrix)
from .expr import Chart, linalg
from .geometry import (GValuedForm, RationalMap, VectorField, bracket_wedge, exterior_derivative,
                       lie_bracket, pullback)
from .liealg import StructureConstants, check_lie_algebra, is_automorphism


class Frame:
    """r vector fields on an r-dimensional chart.

    ``matrix[a][i]`` is the d/dx_a coefficient of X_i (fields are columns).
    """

    def __init__(self, chart: Chart, fields):
        fields = tuple(f if isinstance(f, VectorField) else VectorField(chart, f) for f in fields)
        if len(fields) != chart.dim:
            raise ValueError(f"a frame on a {chart.dim}-dimensional chart needs {chart.dim} fields")
        for f in fields:
            if f.chart != chart:
                fields = tuple(g.lift(chart) for g in fields)
                break
        self.chart = chart
        self.fields = fields

    @classmethod
    def coordinate(cls, chart: Chart) -> "Frame":
        return cls(chart, [VectorField.coordinate(chart, a) for a in range(chart.dim)])

    @property
    def dim(self) -> int:
        return len(self.fields)

    @property
    def matrix(self):
        return [[X.coeffs[a] for X in self.fields] for a in range(self.chart.dim)]

    def det(self):
        return linalg.det(self.matrix)

    def singular_locus(self) -> list[str]:
        """Irreducible factors (over Q) of the numerator and denominator of det."""
        d = self.det()
        if not d:
            raise SingularFrame("frame determinant vanishes identically")
        out = []
        for part in (d.numerator.as_expr(), d.denominator.as_expr()):
            _, facs = sympy.factor_list(part.to_sympy())
            for fac, _ in facs:
                if fac.free_symbols & {sympy.Symbol(v) for v in self.chart.variables + self.chart.tower_names}:
                    out.append(str(self.chart.coerce(str(fac).replace("**", "^"))))
        return sorted(set(out))

    def inverse_matrix(self):
        try:
            return linalg.inverse(self.matrix)
        except SingularMatrix:
            raise SingularFrame("frame fields are dependent at every point") from None

    def components(self, Y: VectorField):
        """Coefficients of Y in this frame."""
        Om = self.inverse_matrix()
        return [sum((Om[i][a] * Y.coeffs[a] for a in range(self.chart.dim)), self.chart.zero)
                for i in range(self.dim)]

    def combine(self, coeffs) -> VectorField:
        """sum_i coeffs[i] X_i."""
        out = VectorField(self.chart, [0] * self.chart.dim)
        for c, X in zip(coeffs, self.fields):
            if c:
                out = out + X.scale(c)
        return out

    def structure_functions(self):
        """c[i][j][k] with [X_i, X_j] = sum_k c_ij^k X_k (rational functions)."""
        r = self.dim
        Om = self.inverse_matrix()
        zero = self.chart.zero
        c = [[[zero] * r for _ in range(r)] for _ in range(r)]
        for i in range(r):
            for j in range(i + 1, r):
                br = lie_bracket(self.fields[i], self.fields[j])
                for k in range(r):
                    v = sum((Om[k][a] * br.coeffs[a] for a in range(r)), zero)
                    c[i][j][k] = v
                    c[j][i][k] = -v
        return c

    def lie_brackets(self):
        return {(i, j): lie_bracket(self.fields[i], self.fields[j])
                for i in range(self.dim) for j in range(i + 1, self.dim)}

    def change_basis(self, P) -> "Frame":
        """Frame with fields Z_a = sum_i P[a][i] X_i."""
        return Frame(self.chart, [self.combine([self.chart.coerce(x) for x in row]) for row in P])

    def to_json(self) -> dict:
        return {"chart": list(self.chart.variables), "params": list(self.chart.parameters),
                "fields": [[str(c) for c in X.coeffs] for X in self.fields]}

    def __eq__(self, other):
        return isinstance(other, Frame) and self.fields == other.fields

    def __hash__(self):
        return hash(self.fields)

    def __repr__(self):
        return "Frame(" + ", ".join(repr(X) for X in self.fields) + ")"


def infer_structure_constants(F: Frame) -> StructureConstants:
    """Solve [X_i, X_j] = sum_k c_ij^k X_k and insist on constant c."""
    r = F.dim
    d = F.det()
    if not d:
        M = F.matrix
        for (i, j), br in F.lie_brackets().items():
            aug = [list(M[a]) + [br.coeffs[a]] for a in range(r)]
            if linalg.rank(aug) > linalg.rank(M):
                raise NotClosed(f"[X{i+1},X{j+1}] is not in the span of the frame",
                                pair=[i + 1, j + 1], bracket=[str(c) for c in br.coeffs])
        raise SingularFrame("frame determinant vanishes identically")
    c = F.structure_functions()
    K = F.chart.constants()
    lam = [[[None] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            for k in range(r):
                v = c[i][j][k]
                if not v.is_constant:
                    raise NonConstantCoefficients(
                        f"[X{i+1},X{j+1}] has non-constant coefficient on X{k+1}",
                        index=[i + 1, j + 1, k + 1], value=str(v))
                lam[i][j][k] = v.restrict(K)
    out = StructureConstants(r, lam, None, K)
    report = check_lie_algebra(out)
    if not report.ok:  # cannot happen for a genuine frame; kept as a guard
        raise NonConstantCoefficients("inferred constants violate the Jacobi identity",
                                      jacobi=[list(v[:4]) for v in report.jacobi[:5]])
    return out


class Coframe(GValuedForm):
    """A g-valued 1-form given by an invertible r x r matrix Omega[i][a]."""

    def __init__(self, chart: Chart, algebra: StructureConstants, coeffs):
        super().__init__(chart, algebra, 1, coeffs)
        if len(self.coeffs) != chart.dim:
            raise SingularFrame("a coframe needs as many components as coordinates")
        if not linalg.det([list(r) for r in self.coeffs]):
            raise SingularFrame("coframe matrix is singular")

    @classmethod
    def from_form(cls, omega: GValuedForm) -> "Coframe":
        return cls(omega.chart, omega.algebra, omega.coeffs)

    @property
    def matrix(self):
        return [list(r) for r in self.coeffs]

    def frame(self) -> Frame:
        M = linalg.inverse(self.matrix)  # M[a][i]
        return Frame(self.chart, [[M[a][i] for a in range(self.chart.dim)]
                                  for i in range(self.chart.dim)])


def coframe(F: Frame, lam: StructureConstants | None = None) -> Coframe:
    if lam is None:
        lam = infer_structure_constants(F)
    return Coframe(F.chart, lam, F.inverse_matrix())


def maurer_cartan_residual(omega: GValuedForm) -> GValuedForm:
    """d omega + 1/2 [omega, omega]."""
    half = omega.chart.const(1) / 2
    return exterior_derivative(omega) + bracket_wedge(omega).scale(half)


def verify_isogeny_pullback(F: RationalMap, theta: GValuedForm, omega: GValuedForm):
    """Return (ok, residual) with residual = F*theta - omega."""
    pulled = pullback(F, theta)
    residual = pulled - GValuedForm(pulled.chart, pulled.algebra, 1,
                                    [[x.lift(pulled.chart) for x in r] for r in omega.coeffs])
    return residual.is_zero(), residual


def conjugating_map(omega: Coframe, omega2: Coframe):
    """f = -Omega . Omega'^{-1} for a pair of commuting parallelisms.

    The result is checked to be a Lie algebra automorphism as an identity in the
    chart variables.
    """
    if omega.chart != omega2.chart:
        raise NonCommutingParallelisms("coframes live on different charts")
    if omega.algebra != omega2.algebra:
        raise NonCommutingParallelisms("coframes have different structure constants")
    X = omega.frame()
    Xp = omega2.frame()
    for i, A in enumerate(X.fields):
        for j, B in enumerate(Xp.fields):
            if not lie_bracket(A, B).is_zero():
                raise NonCommutingParallelisms(f"[X{i+1}, X'{j+1}] != 0", pair=[i + 1, j + 1],
                                               bracket=[str(c) for c in lie_bracket(A, B).coeffs])
    Om = omega.matrix
    Mp = Xp.matrix  # Omega'^{-1}
    r = len(Om)
    f = [[-sum((Om[i][a] * Mp[a][j] for a in range(r)), omega.chart.zero) for j in range(r)]
         for i in range(r)]
    ok, witness = is_automorphism(omega.algebra, f)
    if not ok:
        raise NotAnAutomorphism("conjugating map does not preserve the bracket",
                                pair=[witness[0] + 1, witness[1] + 1])
    return f
