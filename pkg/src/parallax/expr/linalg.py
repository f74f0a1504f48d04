"""Exact dense linear algebra over any field whose elements support + - * /.

Works with ``RatExpr`` as well as ``int``/``Fraction`` entries; zero tests use
truthiness.  Determinants use fraction-free Bareiss elimination.
"""

from __future__ import annotations

from ..errors import SingularMatrix


def _copy(M):
    return [list(row) for row in M]


def identity(n, one=1, zero=0):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = None
            for k in range(m):
                if not A[i][k] or not B[k][j]:
                    continue
                t = A[i][k] * B[k][j]
                acc = t if acc is None else acc + t
            row.append(acc if acc is not None else A[i][0] * 0 if m else 0)
        out.append(row)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)]


def det(M):
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = _copy(M)
    sign = 1
    prev = None
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return A[k][k] * 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = v if prev is None else v / prev
        prev = A[k][k]
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def rref(M):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    A = _copy(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c] if not hasattr(A[r][c], "chart") else A[r][c].chart.one / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M) -> int:
    return len(rref(M)[1]) if M else 0


def nullspace(M, ncols=None, one=1, zero=0):
    """Basis of {v : M v = 0} (list of column vectors)."""
    if not M:
        n = ncols or 0
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    R, piv = rref(M)
    n = len(R[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for r, c in enumerate(piv):
            v[c] = -R[r][f]
        basis.append(v)
    return basis


def inverse(M):
    n = len(M)
    if n == 0:
        return []
    sample = next((x for row in M for x in row if hasattr(x, "chart")), None)
    one = sample.chart.one if sample is not None else 1
    zero = sample.chart.zero if sample is not None else 0
    aug = [list(M[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular", size=n)
    return [row[n:] for row in R]


def solve(M, b):
    """Solve M x = b for square invertible M."""
    Minv = inverse(M)
    return [sum((Minv[i][k] * b[k] for k in range(len(b))), start=Minv[i][0] * 0)
            for i in range(len(Minv))]
