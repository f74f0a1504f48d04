"""
A three-dimensional family with symbolic weights
================================================

X1 = d/dx + alpha y d/dy + beta z d/dz together with d/dy and d/dz. The
weights alpha and beta stay symbolic throughout. The horizontal fields of the
reciprocal connection are e^(alpha x) d/dy and e^(beta x) d/dz, which enter
as tower symbols u and v.
"""

from __future__ import annotations

from parallax import manifest
from parallax.connection import (adjoint_connection, associated_connection, reciprocal,
                                 to_coordinates, verify_horizontal)
from parallax.corpus import get_example
from parallax.geometry import lie_bracket
from parallax.parallelism import infer_structure_constants

for name in ("ex-MD", "ex-MD-log"):
    P = manifest.load(get_example(name))
    print(f"--- {name}: {P.data['description']}")
    F = P.frame()
    lam = infer_structure_constants(F)
    print("brackets:", lam.nonzero_brackets())

    R = reciprocal(associated_connection(F))
    print("reciprocal Christoffels:",
          {f"G{i + 1}{j + 1}^{k + 1}": str(v) for (i, j, k), v in to_coordinates(R).nonzero().items()})

    Y = P.horizontal()
    print("all horizontal:", all(verify_horizontal(R, y).ok for y in Y))
    print("[Y1, Y2] =", lie_bracket(Y[0], Y[1]))

    # in the frame itself, the reciprocal connection is the adjoint one
    A = adjoint_connection(lam, F)
    same = all(R.gamma[i][j][k] == A.gamma[i][j][k].lift(R.chart)
               for i in range(3) for j in range(3) for k in range(3))
    print("matches the adjoint connection:", same)
