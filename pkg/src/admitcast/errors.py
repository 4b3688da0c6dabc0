"""Exception types shared across the package.

The CLI maps these onto exit codes: DataError -> 2, ConvergenceError -> 3.
"""


class DataError(ValueError):
    """Raised for malformed, inconsistent or degenerate input data."""


class ZeroVarianceError(DataError):
    """Raised when an operation requires a series with positive sample variance."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative estimation procedure fails to converge."""
