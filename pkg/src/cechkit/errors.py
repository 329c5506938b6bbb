"""Exception types shared across the library."""


class CechkitError(Exception):
    """Base class for all library errors."""


class InvalidInput(CechkitError):
    """An argument violates a documented precondition."""


class DegenerateInput(CechkitError):
    """The input is degenerate (e.g. all points coincide)."""


class ParseError(InvalidInput):
    """An input file could not be parsed."""
