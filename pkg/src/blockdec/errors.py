"""Exception types shared across the package.

The CLI maps these onto process exit codes: usage problems exit 1, data/file
problems exit 2, numerical failures exit 3.
"""


class BlockdecError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(BlockdecError):
    """An input vector or matrix has a shape the operation cannot accept."""


class InvalidParameterError(BlockdecError):
    """A parameter is outside its documented range (usage error)."""


class DataFormatError(BlockdecError):
    """A data file is malformed.  Carries a line number when one is known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateSystemError(BlockdecError):
    """A restricted linear system is singular and cannot be solved."""


class BudgetExceededError(BlockdecError):
    """An enumeration would exceed the configured combinatorial budget."""


class NumericalError(BlockdecError):
    """A numerical routine failed to reach its required accuracy."""
