"""Vector fields and Lie-algebra-valued forms on a single coordinate chart."""

from __future__ import annotations

from .errors import ChartMismatch, DivisionByZeroPolynomial, IndeterminatePullback
from .expr import Chart, RatExpr, compose
from .liealg import StructureConstants


def _same_chart(*charts):
    first = charts[0]
    for c in charts[1:]:
        if c != first:
            raise ChartMismatch("objects live on different charts",
                                left=repr(first), right=repr(c))
    return first


class VectorField:
    """X = sum_a coeffs[a] d/dx_a."""

    __slots__ = ("chart", "coeffs")

    def __init__(self, chart: Chart, coeffs):
        coeffs = tuple(chart.coerce(c) for c in coeffs)
        if len(coeffs) != chart.dim:
            raise ValueError(f"expected {chart.dim} coefficients, got {len(coeffs)}")
        self.chart = chart
        self.coeffs = coeffs

    @classmethod
    def coordinate(cls, chart: Chart, a: int) -> "VectorField":
        return cls(chart, [1 if b == a else 0 for b in range(chart.dim)])

    def __call__(self, f: RatExpr) -> RatExpr:
        """Directional derivative X(f)."""
        f = self.chart.coerce(f)
        out = self.chart.zero
        for a, v in enumerate(self.chart.variables):
            if self.coeffs[a]:
                out = out + self.coeffs[a] * f.derive(v)
        return out

    apply = __call__

    def lift(self, chart: Chart) -> "VectorField":
        return VectorField(chart, [c.lift(chart) for c in self.coeffs])

    def __add__(self, other):
        _same_chart(self.chart, other.chart)
        return VectorField(self.chart, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        _same_chart(self.chart, other.chart)
        return VectorField(self.chart, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.coeffs])

    def scale(self, f) -> "VectorField":
        f = self.chart.coerce(f)
        return VectorField(self.chart, [f * a for a in self.coeffs])

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.chart == other.chart and \
            self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_json(self) -> dict:
        return {"chart": list(self.chart.variables), "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self):
        terms = [f"({c})*d{v}" for c, v in zip(self.coeffs, self.chart.variables) if c]
        return "VectorField(" + (" + ".join(terms) or "0") + ")"


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X,Y]_i = sum_a (X_a d_a Y_i - Y_a d_a X_i)."""
    chart = _same_chart(X.chart, Y.chart)
    return VectorField(chart, [X(Y.coeffs[i]) - Y(X.coeffs[i]) for i in range(chart.dim)])


class GValuedForm:
    """A g-valued 1-form or 2-form.

    degree 1: ``coeffs[i][a]`` is the component on A_i of dx_a.
    degree 2: ``coeffs[i][a][b]`` is the component on A_i of dx_a ^ dx_b (antisymmetric).
    """

    def __init__(self, chart: Chart, algebra: StructureConstants | None, degree: int, coeffs):
        if degree not in (1, 2):
            raise ValueError("only degrees 1 and 2 are supported")
        self.chart = chart
        self.algebra = algebra
        self.degree = degree
        n = chart.dim
        if degree == 1:
            rows = tuple(tuple(chart.coerce(x) for x in row) for row in coeffs)
            if any(len(row) != n for row in rows):
                raise ValueError(f"each row needs {n} entries")
        else:
            rows = tuple(tuple(tuple(chart.coerce(x) for x in r2) for r2 in r1) for r1 in coeffs)
            for t in rows:
                for a in range(n):
                    for b in range(n):
                        if t[a][b] != -t[b][a]:
                            raise ValueError("2-form table must be antisymmetric")
        if algebra is not None and len(rows) != algebra.dim:
            raise ValueError(f"expected {algebra.dim} Lie-algebra components, got {len(rows)}")
        self.coeffs = rows

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        if self.degree == 1:
            return not any(x for row in self.coeffs for x in row)
        return not any(x for t in self.coeffs for row in t for x in row)

    def nonzero(self):
        """Sorted list of (index tuple, value) for nonzero entries."""
        out = []
        if self.degree == 1:
            for i, row in enumerate(self.coeffs):
                for a, x in enumerate(row):
                    if x:
                        out.append(((i, a), x))
        else:
            for i, t in enumerate(self.coeffs):
                for a in range(len(t)):
                    for b in range(a + 1, len(t)):
                        if t[a][b]:
                            out.append(((i, a, b), t[a][b]))
        return out

    def _combine(self, other, op):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        _same_chart(self.chart, other.chart)
        if self.degree == 1:
            rows = [[op(x, y) for x, y in zip(r, s)] for r, s in zip(self.coeffs, other.coeffs)]
        else:
            rows = [[[op(x, y) for x, y in zip(r, s)] for r, s in zip(t, u)]
                    for t, u in zip(self.coeffs, other.coeffs)]
        return GValuedForm(self.chart, self.algebra, self.degree, rows)

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def scale(self, c) -> "GValuedForm":
        c = self.chart.coerce(c)
        if self.degree == 1:
            rows = [[c * x for x in r] for r in self.coeffs]
        else:
            rows = [[[c * x for x in r] for r in t] for t in self.coeffs]
        return GValuedForm(self.chart, self.algebra, self.degree, rows)

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        return isinstance(other, GValuedForm) and self.degree == other.degree and \
            self.chart == other.chart and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def contract(self, X: VectorField):
        """omega(X) as a vector of Lie-algebra coefficients (degree 1 only)."""
        if self.degree != 1:
            raise ValueError("contraction implemented for 1-forms")
        out = []
        for row in self.coeffs:
            s = self.chart.zero
            for a, x in enumerate(row):
                if x and X.coeffs[a]:
                    s = s + x * X.coeffs[a]
            out.append(s)
        return out

    def to_json(self) -> dict:
        out = {"chart": list(self.chart.variables), "degree": self.degree}
        if self.algebra is not None:
            out["algebra"] = self.algebra.to_json()
        if self.degree == 1:
            out["coeffs"] = [[str(x) for x in r] for r in self.coeffs]
        else:
            out["coeffs"] = [[[str(x) for x in r] for r in t] for t in self.coeffs]
        return out

    def describe(self) -> str:
        """Readable sum such as ``(A1 - x*A2) dy``."""
        names = self.algebra.basis_names if self.algebra else tuple(f"A{i+1}" for i in range(self.rank))
        vs = self.chart.variables
        parts = []
        if self.degree == 1:
            for a, v in enumerate(vs):
                comp = [(names[i], self.coeffs[i][a]) for i in range(self.rank) if self.coeffs[i][a]]
                if comp:
                    parts.append("(" + " + ".join(f"({c})*{n}" for n, c in comp) + f") d{v}")
        else:
            for a in range(len(vs)):
                for b in range(a + 1, len(vs)):
                    comp = [(names[i], self.coeffs[i][a][b]) for i in range(self.rank)
                            if self.coeffs[i][a][b]]
                    if comp:
                        parts.append("(" + " + ".join(f"({c})*{n}" for n, c in comp) +
                                     f") d{vs[a]}^d{vs[b]}")
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"GValuedForm(degree={self.degree}: {self.describe()})"


def exterior_derivative(omega: GValuedForm) -> GValuedForm:
    """(d omega_i)_{ab} = d_a omega_{i,b} - d_b omega_{i,a}."""
    if omega.degree != 1:
        raise ValueError("exterior derivative implemented for 1-forms")
    vs = omega.chart.variables
    n = len(vs)
    out = []
    for row in omega.coeffs:
        t = [[omega.chart.zero] * n for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                v = row[b].derive(vs[a]) - row[a].derive(vs[b])
                t[a][b] = v
                t[b][a] = -v
        out.append(t)
    return GValuedForm(omega.chart, omega.algebra, 2, out)


def bracket_wedge(omega: GValuedForm) -> GValuedForm:
    """Raw [omega, omega]: component i on dx_a^dx_b is
    sum_{j,k} lambda_jk^i (omega_{j,a} omega_{k,b} - omega_{j,b} omega_{k,a})."""
    if omega.degree != 1 or omega.algebra is None:
        raise ValueError("bracket_wedge needs a 1-form with an attached Lie algebra")
    lam = omega.algebra.lam
    r = omega.rank
    n = omega.chart.dim
    W = omega.coeffs
    out = []
    for i in range(r):
        t = [[omega.chart.zero] * n for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                s = omega.chart.zero
                for j in range(r):
                    for k in range(r):
                        c = lam[j][k][i]
                        if c:
                            s = s + c * (W[j][a] * W[k][b] - W[j][b] * W[k][a])
                t[a][b] = s
                t[b][a] = -s
        out.append(t)
    return GValuedForm(omega.chart, omega.algebra, 2, out)


class RationalMap:
    """F: source -> target given by one component per target variable."""

    def __init__(self, source: Chart, target: Chart, components):
        comps = tuple(source.coerce(c) for c in components)
        if len(comps) != target.dim:
            raise ValueError(f"need {target.dim} components, got {len(comps)}")
        self.source = source
        self.target = target
        self.components = comps

    @classmethod
    def identity(cls, chart: Chart) -> "RationalMap":
        return cls(chart, chart, [chart.symbol(v) for v in chart.variables])

    def pull(self, f: RatExpr) -> RatExpr:
        """f o F."""
        mapping = dict(zip(self.target.variables, self.components))
        try:
            return compose(f, mapping, self.source)
        except DivisionByZeroPolynomial as exc:
            raise IndeterminatePullback("a denominator vanishes identically along the map",
                                        expr=str(f), **{k: v for k, v in exc.witness.items()
                                                        if k != "expr"}) from None

    def compose(self, inner: "RationalMap") -> "RationalMap":
        """self o inner."""
        if inner.target != self.source:
            raise ChartMismatch("maps are not composable")
        return RationalMap(inner.source, self.target, [inner.pull(c) for c in self.components])

    def jacobian(self):
        """J[b][a] = d F_b / d x_a."""
        return [[c.derive(v) for v in self.source.variables] for c in self.components]

    def to_json(self) -> dict:
        return {"source": list(self.source.variables), "target": list(self.target.variables),
                "components": [str(c) for c in self.components]}

    def __repr__(self):
        return f"RationalMap({list(self.source.variables)} -> {[str(c) for c in self.components]})"


def pullback(F: RationalMap, omega: GValuedForm) -> GValuedForm:
    """(F*omega)_{i,a} = sum_b (omega_{i,b} o F) d_a F_b."""
    if omega.degree != 1:
        raise ValueError("pullback implemented for 1-forms")
    if not F.target.contains(omega.chart) and omega.chart != F.target:
        raise ChartMismatch("form does not live on the target chart of the map",
                            form=repr(omega.chart), target=repr(F.target))
    J = F.jacobian()
    n_src = F.source.dim
    rows = []
    for row in omega.coeffs:
        pulled = [F.pull(x) if x else None for x in row]
        out = []
        for a in range(n_src):
            s = F.source.zero
            for b, p in enumerate(pulled):
                if p is not None and J[b][a]:
                    s = s + p * J[b][a]
            out.append(s)
        rows.append(out)
    return GValuedForm(F.source, omega.algebra, 1, rows)
