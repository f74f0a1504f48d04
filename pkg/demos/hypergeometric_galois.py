"""
Galois groups of hypergeometric equations
=========================================

Two independent routes to the same answer: exponent differences matched
against a Schwarz-type table, and Kovacic's algorithm on the normal form.
Rationality of symbolic parameters is an explicit input.
"""

from __future__ import annotations

from parallax.errors import Undecidable
from parallax.galois.classify import classify_reciprocal_sl2
from parallax.galois.hypergeometric import HGParams
from parallax.galois.kovacic import kovacic

cases = [
    ("Legendre-type (1/2, 1/2, 1)", HGParams.from_abc("1/2", "1/2", "1"), None),
    ("(-1, 0, c), c irrational", HGParams.from_abc("-1", "0", "c"), {"c": "irrational"}),
    ("(a, -a, 1/2), a irrational", HGParams.from_abc("a", "-a", "1/2"), {"a": "irrational"}),
    ("tetrahedral triple", HGParams.from_lmn("1/3", "1/2", "1/3"), None),
    ("octahedral triple", HGParams.from_lmn("1/2", "1/3", "1/4"), None),
    ("icosahedral triple", HGParams.from_lmn("1/2", "1/3", "1/5"), None),
]
for label, p, flags in cases:
    rep = classify_reciprocal_sl2(p, flags)
    print(f"{label:32s} SL2: {rep.sl2.name:18s} PSL2: {rep.psl2.name}")

# without a flag a symbolic c cannot be classified
try:
    classify_reciprocal_sl2(HGParams.from_abc("-1", "0", "c"))
except Undecidable as exc:
    print("no flag for c:", exc)

# Kovacic directly on y'' = r y, with the certificate it found
for r in ("0", "1", "z", "-3/(16*z^2)"):
    res = kovacic(r)
    cert = res.certificate.to_json() if res.certificate else None
    print(f"r = {r}: {res.group.name}", cert["polynomial_in_omega"] if cert else "")
