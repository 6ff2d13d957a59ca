"""Shared exception types.

Exit-code mapping used by the CLI: InputError -> 1, ProblemParseError -> 2,
ResourceGuardError -> 3.
"""


class MatdetError(Exception):
    """Base class for all library errors."""


class InputError(MatdetError):
    """Mathematically invalid input (non-prime characteristic, constant
    terms where a local matrix is required, shape mismatches, ...)."""


class ProblemParseError(MatdetError):
    """Syntax error in a polynomial expression, matrix or problem file."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)


class ResourceGuardError(MatdetError):
    """A configured resource guard (state budget, degree cap) was exceeded."""
