"""Galois group of the reciprocal connection of the sl2 parallelism attached to nu.

The pipeline derives the symmetry equation a''' + 2 nu a' + nu' a = 0 from
the jet-space frame, checks it against the closed form, and classifies the
order-two equation whose symmetric square it is.  That base equation is
y'' = -(nu/2) y; the result is reported in SL2 and projected to PSL2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..expr import RatExpr
from .classes import GaloisClass, psl2_projection
from .hypergeometric import HGParams, classify_hypergeometric, hypergeometric_normal_form
from .kovacic import KovacicResult, kovacic
from .symsquare import symmetric_square
from .ode import LinearODE

CONVENTION = ("the symmetry equation a''' + 2 nu a' + nu' a = 0 is the symmetric square of "
              "y'' = -(nu/2) y; the symmetric square of y'' = nu y would be "
              "a''' - 4 nu a' - 2 nu' a = 0")


@dataclass
class ReciprocalReport:
    nu: RatExpr
    symmetry_ode: LinearODE
    matches_closed_form: bool
    base_equation: LinearODE
    sl2: GaloisClass
    psl2: GaloisClass
    method: str
    certificate: dict | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "nu": str(self.nu),
            "symmetry_ode": str(self.symmetry_ode),
            "symmetry_ode_matches_closed_form": self.matches_closed_form,
            "base_equation": str(self.base_equation),
            "sl2_class": self.sl2.name,
            "psl2_class": self.psl2.name,
            "method": self.method,
            "certificate": self.certificate,
            "convention": CONVENTION,
            "notes": list(self.notes),
        }


def _symmetry_data(nu: RatExpr):
    from ..jets import derive_symmetry_ode, expected_lin

    ode = derive_symmetry_ode(nu)
    base = LinearODE.second_order(-nu / 2)
    ok = ode == expected_lin(nu) and symmetric_square(base) == ode
    return ode, base, ok


def classify_reciprocal_sl2(nu, flags: dict | None = None) -> ReciprocalReport:
    """``nu`` is a rational function of z (text or RatExpr) or :class:`HGParams`.

    For hypergeometric input the sl2 potential is 2*Q with y'' + Q y = 0 the
    normal form, so that the base equation is the normal form itself.
    """
    from ..jets import coerce_nu

    notes = []
    if isinstance(nu, HGParams):
        p = nu
        nf = hypergeometric_normal_form(p)
        sl2_nu = nf.sl2_nu
        ode, base, ok = _symmetry_data(sl2_nu)
        hg = classify_hypergeometric(p, flags)
        certificate = None
        method = "exponent differences"
        if p.is_numeric and not flags:
            k: KovacicResult = kovacic(nf.base_potential)
            if k.group != hg.sl2:
                raise AssertionError(f"classifiers disagree: kovacic {k.group.name}, "
                                     f"exponent differences {hg.sl2.name}")
            certificate = k.certificate.to_json() if k.certificate else None
            method = "exponent differences, cross-checked by kovacic"
            notes.append(f"hypergeometric branch: {hg.branch}")
        return ReciprocalReport(sl2_nu, ode, ok, base, hg.sl2, hg.psl2, method, certificate, notes)

    nu = coerce_nu(nu)
    if nu is None:
        raise ValueError("classification needs an explicit nu")
    if nu.chart.parameters and nu.free_symbols & set(nu.chart.parameters):
        raise ValueError("symbolic parameters need hypergeometric input with flags")
    ode, base, ok = _symmetry_data(nu)
    k = kovacic(base.potential())
    return ReciprocalReport(nu, ode, ok, base, k.group, psl2_projection(k.group), "kovacic",
                            k.certificate.to_json() if k.certificate else None, k.notes)
