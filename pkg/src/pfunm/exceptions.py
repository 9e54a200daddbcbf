"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes, so library code should raise
the most specific class that applies rather than bare ValueError where a
numerical or format failure is meant.
"""

__all__ = [
    "PfunmError",
    "NumericalError",
    "SingularMatrixError",
    "BreakdownError",
    "DomainError",
    "FormatError",
]


class PfunmError(Exception):
    """Base class for all package-specific errors."""


class NumericalError(PfunmError):
    """A numerical operation failed (singular pivot, breakdown, bad domain)."""


class SingularMatrixError(NumericalError):
    """A direct factorization hit an exactly singular pivot.

    Carries the zero-based pivot index when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class BreakdownError(NumericalError):
    """An elimination or recurrence produced an unusable (zero) pivot."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DomainError(NumericalError):
    """An argument lies outside the mathematical domain of the operation."""


class FormatError(PfunmError):
    """A file or serialized payload is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
