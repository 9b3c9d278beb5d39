"""Exception types shared across the package."""


class DcovSelectError(Exception):
    """Base class for package errors."""


class DataValidationError(DcovSelectError):
    """Input data is malformed (non-finite values, missing cells, bad labels)."""


class SolverError(DcovSelectError):
    """The LP solver failed to return a verified optimal solution."""
