"""
The affine group of the line as a parallelized surface
======================================================

Two vector fields on the plane, d/dx and x d/dx + d/dy, close under the
bracket and span every tangent space. This walk-through computes their
structure constants and coframe, the connection whose horizontal fields are
the symmetries, and checks a closed-form symmetry involving e^y.
"""

from __future__ import annotations

from parallax.connection import (associated_connection, opposite_initial_brackets, reciprocal,
                                 to_coordinates, verify_horizontal)
from parallax.expr import Chart
from parallax.geometry import VectorField, lie_bracket
from parallax.parallelism import Frame, coframe, infer_structure_constants, maurer_cartan_residual

# the frame: each field is a list of components on the chart (x, y)
plane = Chart(("x", "y"))
F = Frame(plane, [["1", "0"], ["x", "1"]])
lam = infer_structure_constants(F)
print("brackets:", lam.nonzero_brackets())

# the dual coframe, one row per basis element A_i
omega = coframe(F)
print("coframe:", omega.describe())
print("Maurer-Cartan residual vanishes:", maurer_cartan_residual(omega).is_zero())

# reciprocal connection, written in the coordinate frame
R = reciprocal(associated_connection(F))
for (i, j, k), v in to_coordinates(R).nonzero().items():
    print(f"Gamma_{i + 1}{j + 1}^{k + 1} = {v}")

# the symmetries need e^y, so extend the chart by t with dt/dy = t
tower = plane.extend("t", {"y": "t"})
Y1 = VectorField(tower, ["t", "0"])
Y2 = VectorField(tower, ["0", "1"])
for name, Y in (("e^y d/dx", Y1), ("d/dy", Y2)):
    print(name, "horizontal:", verify_horizontal(R, Y).ok)
print("[Y1, Y2] == -Y1:", lie_bracket(Y1, Y2) == -Y1)

# symmetries bracket with the opposite constants of the frame
rep = opposite_initial_brackets(F, [Y1, Y2], {"x": 0, "y": 0}, {"t": 1})
print("opposite brackets:", rep.ok)
