"""Exception hierarchy shared by every parallax module.

Every error carries a ``witness`` mapping: a small JSON-friendly object that
pins down *where* the failure happened (indices, offending expression, ...).
The command-line front end prints it verbatim.
"""

from __future__ import annotations


class ParallaxError(Exception):
    """Base class of all library errors."""

    def __init__(self, message: str, **witness):
        super().__init__(message)
        self.witness = witness

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), "witness": _jsonable(self.witness)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


# -- expression kernel ------------------------------------------------------

class ExprSyntaxError(ParallaxError, SyntaxError):
    """Source text does not follow the expression grammar."""

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        ParallaxError.__init__(self, message, position=position, expected=list(expected))
        self.position = position
        self.expected = tuple(expected)


class UnknownSymbol(ParallaxError, NameError):
    pass


class DivisionByZeroPolynomial(ParallaxError, ZeroDivisionError):
    pass


class NameClash(ParallaxError):
    pass


class NonIntegrable(ParallaxError):
    pass


class TowerInsufficient(ParallaxError):
    pass


class ChartMismatch(ParallaxError):
    pass


class SingularMatrix(ParallaxError):
    pass


# -- geometry / parallelisms ------------------------------------------------

class IndeterminatePullback(ParallaxError):
    pass


class SingularFrame(SingularMatrix):
    pass


class NotClosed(ParallaxError):
    pass


class NonConstantCoefficients(ParallaxError):
    pass


class NonCommutingParallelisms(ParallaxError):
    pass


class NotAnAutomorphism(ParallaxError):
    pass


class InitialConditionMismatch(ParallaxError):
    pass


# -- Lie algebras ------------------------------------------------------------

class NotADerivation(ParallaxError):
    pass


class NonCommutingAction(ParallaxError):
    pass


# -- jets / Galois -----------------------------------------------------------

class OrderTooSmall(ParallaxError):
    pass


class EliminationFailure(ParallaxError):
    pass


class Undecidable(ParallaxError):
    pass


class SchemaError(ParallaxError):
    """Malformed problem manifest; ``witness['pointer']`` is a JSON pointer."""
