"""Exact rational-function kernel."""

from __future__ import annotations

from .core import (UNKNOWN, Chart, ConstField, DiffTower, Poly, RatExpr, compose, derive,
                   extend_tower)
from .parser import parse_expr, to_text

__all__ = ["UNKNOWN", "Chart", "ConstField", "DiffTower", "Poly", "RatExpr", "compose",
           "derive", "extend_tower", "parse_expr", "to_text"]
