"""Monic scalar linear ODEs with rational coefficients in one variable."""

from __future__ import annotations

from ..expr import Chart, RatExpr


def _primes(n):
    return "'" * n if n <= 3 else f"^({n})"


class LinearODE:
    """a^(n) + coeffs[n-1] a^(n-1) + ... + coeffs[0] a = 0.

    ``coeffs[i]`` multiplies the i-th derivative.  The chart has a single
    variable (``var``) and may carry parameters or a formal tower (for a
    symbolic coefficient function such as nu0, nu1, ...).
    """

    def __init__(self, chart: Chart, coeffs, var: str | None = None, unknown: str = "a"):
        if chart.dim != 1:
            raise ValueError("ODE charts have exactly one variable")
        self.chart = chart
        self.var = var or chart.variables[0]
        self.coeffs = tuple(chart.coerce(c) for c in coeffs)
        self.unknown = unknown

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def second_order(cls, r: RatExpr, unknown="y") -> "LinearODE":
        """y'' = r y, i.e. y'' - r y = 0."""
        return cls(r.chart, [-r, r.chart.zero], unknown=unknown)

    def potential(self) -> RatExpr:
        """r for an operator of the form y'' = r y."""
        if self.order != 2 or self.coeffs[1]:
            raise ValueError("not of the form y'' = r y")
        return -self.coeffs[0]

    def apply(self, derivs) -> RatExpr:
        """Evaluate the operator on a function given by its derivatives [a, a', ..., a^(n)]."""
        out = derivs[self.order]
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + c * derivs[i]
        return out

    def __eq__(self, other):
        return isinstance(other, LinearODE) and self.order == other.order and \
            self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        u = self.unknown
        parts = [f"{u}{_primes(self.order)}"]
        for i in range(self.order - 1, -1, -1):
            c = self.coeffs[i]
            if c:
                parts.append(f"({c})*{u}{_primes(i)}")
        return " + ".join(parts) + " = 0"

    def to_json(self) -> dict:
        return {"order": self.order, "variable": self.var, "unknown": self.unknown,
                "coefficients": {str(i): str(c) for i, c in enumerate(self.coeffs)},
                "text": str(self)}

    def __repr__(self):
        return f"LinearODE({self})"
