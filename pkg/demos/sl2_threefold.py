"""
The sl2-parallelized threefold of a potential nu
================================================

Prolonging the Witt fields z^(m+1) d/dz to jets and cutting by the
Schwarzian ideal gives a threefold with an sl2 frame. Its symmetries solve a
third-order linear equation, derived here by elimination.
"""

from __future__ import annotations

from parallax.jets import (derive_symmetry_ode, ideal_identities, jet_bracket, sl2_frame,
                           witt_prolong)
from parallax.parallelism import infer_structure_constants

# Witt relations [E_m, E_n] = (m - n) E_(m+n) on a truncation of order 4;
# the top component would need z_6, so compare the ones below it
E0, E1 = witt_prolong(0, 4), witt_prolong(1, 4)
print("E1 =", E1)
br = jet_bracket(E0, E1)
print("[E0, E1] == -E1 below the top:", br.components()[:4] == [-c for c in E1.components()[:4]])

# with nu left formal, everything is symbolic in nu0, nu1, ...
e0, e1 = ideal_identities()
print("E0.f - 2f =", e0, " E1.f =", e1)
F = sl2_frame()
print("frame determinant:", F.det())
print("brackets:", infer_structure_constants(F).nonzero_brackets())
print("symmetry equation:", derive_symmetry_ode())

# a concrete potential
for nu in ("0", "1/z^2", "z"):
    print(f"nu = {nu}:", derive_symmetry_ode(nu))
