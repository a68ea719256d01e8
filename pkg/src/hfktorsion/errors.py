"""Exception types raised by hfktorsion."""

from __future__ import annotations


class HFKError(Exception):
    """Base class for all errors raised by this package."""


class AlgebraError(HFKError, ArithmeticError):
    pass


class ComplexError(HFKError, ValueError):
    """A complex is structurally malformed (bad names, negative exponents)."""


class CodecError(HFKError, ValueError):
    """A complex document could not be decoded.

    ``location`` is a dotted path into the document, e.g. ``arrows[3].to``.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class AlexanderError(HFKError, ValueError):
    pass


class ParseError(HFKError, ValueError):
    """Knot expression syntax error with the offending column."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.message = message
        super().__init__(f"{message} at column {pos + 1}")

    def pretty(self) -> str:
        return f"error: {self.message}\n  {self.text}\n  {' ' * self.pos}^"


class WindowNotStabilized(HFKError, RuntimeError):
    pass


class BoundsError(HFKError, ValueError):
    """Invalid numeric input to a bound or consistency rule."""
