"""parallax: exact computations with rational parallelisms and their Lie connections."""

from __future__ import annotations

__version__ = "0.1.0"
