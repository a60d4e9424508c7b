"""
Exception hierarchy for the clique-width isomorphism toolkit.

This module provides:
- A single root exception so callers can catch everything from the library
- Parse errors carrying positions (k-expressions) or line/column (graph files)
- Distinct signals for precondition violations, the cwd > 3 verdict and
  internal invariant failures
"""

from typing import Optional


class CW3IsoError(Exception):
    """Base class for all library errors."""


class ExpressionSyntaxError(CW3IsoError):
    """Raised when k-expression text does not conform to the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.message = message
        self.position = position


class MalformedExpressionError(CW3IsoError):
    """Raised when a parse tree is ill-formed or its evaluation would create a multi-edge."""


class PreconditionError(CW3IsoError, ValueError):
    """Raised when an operation is called outside its documented domain."""


class CliqueWidthExceeded(CW3IsoError):
    """Raised when no candidate labeling of a prime graph admits a 3-expression."""


class InputFormatError(CW3IsoError):
    """Raised when a graph input file cannot be parsed."""

    def __init__(self, message: str, line: int, column: Optional[int] = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{message} ({where})")
        self.message = message
        self.line = line
        self.column = column


class InvariantError(CW3IsoError, AssertionError):
    """Raised when an internal invariant does not hold."""
