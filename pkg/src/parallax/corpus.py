"""Built-in example manifests.

``expect`` blocks record the values the library must reproduce.  Where the
source text prints a different sign convention the stored value is the one
the frame actually produces; the conventions are noted in ``description``.  Coframe matrices have one
row per algebra basis element and one column per coordinate differential.
"""

from __future__ import annotations

import copy

_EXAMPLES = {
    "ex-B": {
        "kind": "parallelism",
        "name": "ex-B",
        "description": "Affine group of the line: X1 = d/dx, X2 = x d/dx + d/dy.",
        "chart": ["x", "y"],
        "frame": [["1", "0"], ["x", "1"]],
        "algebra": {"dim": 2, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": "1"}}]},
        "tower": [{"name": "t", "derivatives": {"y": "t"}}],
        "horizontal": [["t", "0"], ["0", "1"]],
        "point": {"x": "0", "y": "0"},
        "tower_values": {"t": "1"},
        "expect": {
            "coframe": [["1", "-x"], ["0", "1"]],
            "reciprocal_coordinates": [{"i": 2, "j": 1, "k": 1, "value": "-1"}],
            "reciprocal_parallelism": [{"i": 1, "j": 2, "k": 1, "value": "1"},
                                       {"i": 2, "j": 1, "k": 1, "value": "-1"}],
        },
    },
    "ex-MD": {
        "kind": "parallelism",
        "name": "ex-MD",
        "description": ("X1 = d/dx + alpha y d/dy + beta z d/dz, X2 = d/dy, X3 = d/dz; "
                        "[X1,X2] = -alpha X2 and [X1,X3] = -beta X3 for this frame."),
        "chart": ["x", "y", "z"],
        "params": ["alpha", "beta"],
        "frame": [["1", "alpha*y", "beta*z"], ["0", "1", "0"], ["0", "0", "1"]],
        "algebra": {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"2": "-alpha"}},
                                           {"i": 1, "j": 3, "coeffs": {"3": "-beta"}}]},
        "tower": [{"name": "u", "derivatives": {"x": "alpha*u"}},
                  {"name": "v", "derivatives": {"x": "beta*v"}}],
        "horizontal": [["1", "0", "0"], ["0", "u", "0"], ["0", "0", "v"]],
        "point": {"x": "0", "y": "0", "z": "0"},
        "tower_values": {"u": "1", "v": "1"},
        "expect": {
            "coframe": [["1", "0", "0"], ["-alpha*y", "1", "0"], ["-beta*z", "0", "1"]],
            "reciprocal_coordinates": [{"i": 1, "j": 2, "k": 2, "value": "-alpha"},
                                       {"i": 1, "j": 3, "k": 3, "value": "-beta"}],
        },
    },
    "ex-MD-log": {
        "kind": "parallelism",
        "name": "ex-MD-log",
        "description": ("Variant with x d/dx in place of d/dx: X1 = x d/dx + alpha y d/dy + beta z d/dz; "
                        "horizontal fields carry x^alpha and x^beta."),
        "chart": ["x", "y", "z"],
        "params": ["alpha", "beta"],
        "frame": [["x", "alpha*y", "beta*z"], ["0", "1", "0"], ["0", "0", "1"]],
        "algebra": {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"2": "-alpha"}},
                                           {"i": 1, "j": 3, "coeffs": {"3": "-beta"}}]},
        "tower": [{"name": "p", "derivatives": {"x": "alpha*p/x"}},
                  {"name": "q", "derivatives": {"x": "beta*q/x"}}],
        "horizontal": [["x", "0", "0"], ["0", "p", "0"], ["0", "0", "q"]],
        "point": {"x": "1", "y": "0", "z": "0"},
        "tower_values": {"p": "1", "q": "1"},
        "expect": {
            "coframe": [["1/x", "0", "0"], ["-alpha*y/x", "1", "0"], ["-beta*z/x", "0", "1"]],
            "reciprocal_coordinates": [{"i": 1, "j": 1, "k": 1, "value": "-1/x"},
                                       {"i": 1, "j": 2, "k": 2, "value": "-alpha/x"},
                                       {"i": 1, "j": 3, "k": 3, "value": "-beta/x"}],
        },
    },
    "sl2-nu": {
        "kind": "sl2",
        "name": "sl2-nu",
        "description": "The sl2 parallelism of the threefold f = 0 for a formal potential nu(z).",
        "nu": "nu",
        "algebra": {"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"1": "-1"}},
                                           {"i": 1, "j": 3, "coeffs": {"2": "-2"}},
                                           {"i": 2, "j": 3, "coeffs": {"3": "-1"}}]},
        "expect": {"determinant": "2*z1^3"},
    },
    "hg-legendre": {
        "kind": "galois", "name": "hg-legendre",
        "description": "Legendre-type parameters (1/2, 1/2, 1).",
        "hypergeometric": {"a": "1/2", "b": "1/2", "c": "1"},
        "expect": {"psl2_class": "Full"},
    },
    "hg-triangular": {
        "kind": "galois", "name": "hg-triangular",
        "description": "(a, b) = (-1, 0) with c irrational: upper triangular group.",
        "hypergeometric": {"a": "-1", "b": "0", "c": "c"},
        "flags": {"c": "irrational"},
        "expect": {"psl2_class": "Borel"},
    },
    "hg-unipotent": {
        "kind": "galois", "name": "hg-unipotent",
        "description": "(a, b, c) = (-1, 0, 1): unipotent group (any nonzero integer c behaves alike).",
        "hypergeometric": {"a": "-1", "b": "0", "c": "1"},
        "expect": {"psl2_class": "Unipotent"},
    },
    "hg-dihedral": {
        "kind": "galois", "name": "hg-dihedral",
        "description": "c = 1/2, a + b = 0 with a irrational: infinite dihedral group.",
        "hypergeometric": {"a": "a", "b": "-a", "c": "1/2"},
        "flags": {"a": "irrational"},
        "expect": {"psl2_class": "DihedralInfinite"},
    },
    "hg-tetrahedral": {
        "kind": "galois", "name": "hg-tetrahedral",
        "description": "Exponent differences (1/3, 1/2, 1/3).",
        "hypergeometric": {"l": "1/3", "m": "1/2", "n": "1/3"},
        "expect": {"psl2_class": "Tetrahedral"},
    },
    "hg-octahedral": {
        "kind": "galois", "name": "hg-octahedral",
        "description": "Exponent differences (1/2, 1/3, 1/4).",
        "hypergeometric": {"l": "1/2", "m": "1/3", "n": "1/4"},
        "expect": {"psl2_class": "Octahedral"},
    },
    "hg-icosahedral": {
        "kind": "galois", "name": "hg-icosahedral",
        "description": "Exponent differences (1/2, 1/3, 1/5).",
        "hypergeometric": {"l": "1/2", "m": "1/3", "n": "1/5"},
        "expect": {"psl2_class": "Icosahedral"},
    },
}


def list_examples() -> list[dict]:
    return [{"name": k, "kind": v["kind"], "description": v["description"]}
            for k, v in sorted(_EXAMPLES.items())]


def get_example(name: str) -> dict:
    if name not in _EXAMPLES:
        raise KeyError(name)
    return copy.deepcopy(_EXAMPLES[name])
