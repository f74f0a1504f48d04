"""Finite-dimensional Lie algebras given by structure constants.

Indices are 0-based in the Python API; ``lam[i][j][k]`` is the coefficient of
``A_k`` in ``[A_i, A_j]``.  Entries are :class:`RatExpr` constants over a
parameter chart, so every check is an identity in the parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import NonCommutingAction, NotADerivation, SingularMatrix
from .expr import Chart, ConstField, RatExpr
from .expr import linalg


def _const_chart(params) -> Chart:
    if isinstance(params, Chart):
        return params.constants()
    if isinstance(params, ConstField):
        return Chart((), params)
    return Chart((), ConstField(tuple(params or ())))


class StructureConstants:
    """The tensor lambda_ij^k of an r-dimensional Lie algebra."""

    def __init__(self, dim: int, lam, basis_names=None, params=()):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.chart = _const_chart(params)
        K = self.chart
        self.lam = tuple(tuple(tuple(K.coerce(lam[i][j][k]) for k in range(dim))
                               for j in range(dim)) for i in range(dim))
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    if not self.lam[i][j][k].is_constant:
                        raise ValueError(f"structure constant ({i},{j},{k}) is not constant")
        self.basis_names = tuple(basis_names) if basis_names else tuple(f"A{i + 1}" for i in range(dim))

    # constructors -----------------------------------------------------------------

    @classmethod
    def from_brackets(cls, dim, brackets, params=(), basis_names=None):
        """``brackets`` maps (i, j) to {k: coefficient}; antisymmetry is completed.

        A pair given in both orders must be consistent.
        """
        K = _const_chart(params)
        lam = [[[K.zero] * dim for _ in range(dim)] for _ in range(dim)]
        seen = {}
        for (i, j), coeffs in brackets.items():
            if i == j:
                if any(K.coerce(v) for v in coeffs.values()):
                    raise ValueError(f"[A{i+1},A{i+1}] must vanish")
                continue
            vec = [K.zero] * dim
            for k, v in coeffs.items():
                vec[k] = K.coerce(v)
            key = (min(i, j), max(i, j))
            signed = vec if i < j else [-v for v in vec]
            if key in seen and seen[key] != signed:
                raise ValueError(f"inconsistent brackets given for pair {key}")
            seen[key] = signed
        for (i, j), vec in seen.items():
            for k in range(dim):
                lam[i][j][k] = vec[k]
                lam[j][i][k] = -vec[k]
        return cls(dim, lam, basis_names, K)

    @classmethod
    def abelian(cls, dim, params=()):
        return cls.from_brackets(dim, {}, params)

    # views -------------------------------------------------------------------------------

    @property
    def parameters(self):
        return self.chart.parameters

    def bracket(self, u, v):
        """Bracket of coefficient vectors."""
        K = self.chart
        out = [K.zero] * self.dim
        for i in range(self.dim):
            if not u[i]:
                continue
            for j in range(self.dim):
                if not v[j]:
                    continue
                c = u[i] * v[j]
                for k in range(self.dim):
                    if self.lam[i][j][k]:
                        out[k] = out[k] + c * self.lam[i][j][k]
        return out

    def basis_vector(self, i):
        K = self.chart
        return [K.one if k == i else K.zero for k in range(self.dim)]

    def is_abelian(self) -> bool:
        return not any(x for a in self.lam for b in a for x in b)

    def nonzero_brackets(self):
        """{(i, j): {k: value}} for i < j with a nonzero bracket."""
        out = {}
        for i, j in combinations(range(self.dim), 2):
            row = {k: v for k, v in enumerate(self.lam[i][j]) if v}
            if row:
                out[(i, j)] = row
        return out

    def lift(self, chart: Chart) -> "StructureConstants":
        return StructureConstants(self.dim, [[[x.lift(chart.constants()) for x in b] for b in a]
                                             for a in self.lam], self.basis_names, chart)

    def change_basis(self, P):
        """Constants in the basis B_a = sum_i P[a][i] A_i (P invertible, constant)."""
        K = self.chart
        P = [[K.coerce(x) for x in row] for row in P]
        Pinv = linalg.inverse(P)
        r = self.dim
        lam = [[None] * r for _ in range(r)]
        for a in range(r):
            for b in range(r):
                br = self.bracket(P[a], P[b])
                # express br (in A coordinates) in the B basis: coeffs c with sum c_c P[c] = br
                lam[a][b] = [sum((br[i] * Pinv[i][c] for i in range(r)), K.zero) for c in range(r)]
        return StructureConstants(r, lam, None, K)

    def to_json(self) -> dict:
        out = {"dim": self.dim, "brackets": [], "params": list(self.parameters)}
        for (i, j), row in self.nonzero_brackets().items():
            out["brackets"].append({"i": i + 1, "j": j + 1,
                                    "coeffs": {str(k + 1): str(v) for k, v in row.items()}})
        return out

    @classmethod
    def from_json(cls, data) -> "StructureConstants":
        params = tuple(data.get("params", ()))
        brackets = {}
        for b in data.get("brackets", []):
            brackets[(b["i"] - 1, b["j"] - 1)] = {int(k) - 1: v for k, v in b["coeffs"].items()}
        return cls.from_brackets(data["dim"], brackets, params)

    def __eq__(self, other):
        return isinstance(other, StructureConstants) and self.dim == other.dim and all(
            self.lam[i][j][k] == other.lam[i][j][k]
            for i in range(self.dim) for j in range(self.dim) for k in range(self.dim))

    def __hash__(self):
        return hash((self.dim, self.lam))

    def __repr__(self):
        body = ", ".join(f"[{self.basis_names[i]},{self.basis_names[j]}]=" +
                         " + ".join(f"({v})*{self.basis_names[k]}" for k, v in row.items())
                         for (i, j), row in self.nonzero_brackets().items())
        return f"StructureConstants(dim={self.dim}; {body or 'abelian'})"


@dataclass
class LieReport:
    ok: bool
    antisymmetry: list = field(default_factory=list)  # (i, j, k)
    jacobi: list = field(default_factory=list)        # (i, j, k, l, value)

    def __bool__(self):
        return self.ok


def check_lie_algebra(lam: StructureConstants) -> LieReport:
    """Return every antisymmetry and Jacobi violation (report style, never raises)."""
    r = lam.dim
    L = lam.lam
    anti = [(i, j, k) for i in range(r) for j in range(r) for k in range(r)
            if L[i][j][k] + L[j][i][k]]
    jac = []
    for i in range(r):
        for j in range(r):
            for k in range(r):
                for l in range(r):
                    s = lam.chart.zero
                    for m in range(r):
                        s = s + L[j][k][m] * L[i][m][l] + L[k][i][m] * L[j][m][l] + L[i][j][m] * L[k][m][l]
                    if s:
                        jac.append((i, j, k, l, s))
    return LieReport(not anti and not jac, anti, jac)


def center(lam: StructureConstants):
    """Basis of {v : [v, A_j] = 0 for all j}."""
    r = lam.dim
    K = lam.chart
    rows = [[lam.lam[i][j][k] for i in range(r)] for j in range(r) for k in range(r)]
    rows = [row for row in rows if any(row)]
    return linalg.nullspace(rows, r, K.one, K.zero)


def derived_subalgebra(lam: StructureConstants):
    """Return (basis of [g, g] in reduced echelon form, abelianization dimension)."""
    r = lam.dim
    vecs = [list(lam.lam[i][j]) for i, j in combinations(range(r), 2)]
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return [], r
    R, piv = linalg.rref(vecs)
    basis = [R[t] for t in range(len(piv))]
    return basis, r - len(basis)


def adjoint_rep(lam: StructureConstants):
    """Matrices ad(A_i) with (ad A_i)[k][j] = lambda_ij^k."""
    r = lam.dim
    return [[[lam.lam[i][j][k] for j in range(r)] for k in range(r)] for i in range(r)]


def _mat_apply(M, v):
    K = v[0].chart if hasattr(v[0], "chart") else None
    out = []
    for k in range(len(M)):
        s = K.zero if K else 0
        for i in range(len(v)):
            if M[k][i] and v[i]:
                s = s + M[k][i] * v[i]
        out.append(s)
    return out


def is_automorphism(lam: StructureConstants, M):
    """Check M[A_i, A_j] = [M A_i, M A_j] with M A_i = sum_k M[k][i] A_k.

    Returns ``(True, None)`` or ``(False, (i, j))`` for the first failing pair.
    Entries of ``M`` may live on any chart containing the parameter chart
    (so that point-dependent matrices can be tested as identities).
    """
    r = lam.dim
    M = [[lam.chart.coerce(x) if not isinstance(x, RatExpr) else x for x in row] for row in M]
    if len(M) != r or any(len(row) != r for row in M):
        raise ValueError(f"matrix must be {r}x{r}")
    d = linalg.det(M)
    if not d:
        raise SingularMatrix("automorphisms must be invertible", det=str(d))
    cols = [[M[k][i] for k in range(r)] for i in range(r)]
    for i, j in combinations(range(r), 2):
        lhs = _mat_apply(M, list(lam.lam[i][j]))
        rhs = lam.bracket(cols[i], cols[j])
        if any(a != b for a, b in zip(lhs, rhs)):
            return False, (i, j)
    return True, None


def semidirect_sum(t_dim: int, h: StructureConstants, action) -> StructureConstants:
    """Structure constants of t (abelian, dim t_dim) acting on h by derivations.

    Basis order: T_1..T_t, then H_1..H_s; [T_i, H_j] = sum_k action[i][k][j] H_k.
    """
    K = h.chart
    s = h.dim
    acts = [[[K.coerce(x) for x in row] for row in D] for D in action]
    if len(acts) != t_dim:
        raise ValueError("need one action matrix per generator of t")
    for a, D in enumerate(acts):
        for i in range(s):
            for j in range(i + 1, s):
                # D[H_i,H_j] = [D H_i, H_j] + [H_i, D H_j]
                lhs = _mat_apply(D, list(h.lam[i][j]))
                Di = [D[k][i] for k in range(s)]
                Dj = [D[k][j] for k in range(s)]
                rhs = [x + y for x, y in zip(h.bracket(Di, h.basis_vector(j)),
                                             h.bracket(h.basis_vector(i), Dj))]
                if any(x != y for x, y in zip(lhs, rhs)):
                    raise NotADerivation(f"action matrix {a + 1} is not a derivation",
                                         generator=a + 1, bracket=[i + 1, j + 1])
    for a, b in combinations(range(t_dim), 2):
        AB = linalg.matmul(acts[a], acts[b])
        BA = linalg.matmul(acts[b], acts[a])
        if any(x != y for ra, rb in zip(AB, BA) for x, y in zip(ra, rb)):
            raise NonCommutingAction("action matrices do not commute", pair=[a + 1, b + 1])
    n = t_dim + s
    lam = [[[K.zero] * n for _ in range(n)] for _ in range(n)]
    for a in range(t_dim):
        for j in range(s):
            for k in range(s):
                v = acts[a][k][j]
                lam[a][t_dim + j][t_dim + k] = v
                lam[t_dim + j][a][t_dim + k] = -v
    for i in range(s):
        for j in range(s):
            for k in range(s):
                lam[t_dim + i][t_dim + j][t_dim + k] = h.lam[i][j][k]
    names = tuple(f"T{a + 1}" for a in range(t_dim)) + tuple(f"H{j + 1}" for j in range(s))
    return StructureConstants(n, lam, names, K)


# handy named algebras -----------------------------------------------------------------------

def sl2(params=()) -> StructureConstants:
    """Basis (E_-1, E_0, E_1): [E-1,E0]=E-1, [E-1,E1]=2E0, [E0,E1]=E1."""
    return StructureConstants.from_brackets(3, {(0, 1): {0: 1}, (0, 2): {1: 2}, (1, 2): {2: 1}},
                                            params, ("Em1", "E0", "E1"))
