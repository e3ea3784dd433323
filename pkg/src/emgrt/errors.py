"""Exception types shared across the package."""


class EmgrtError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(EmgrtError, ValueError):
    """An argument value is outside its documented domain."""


class DataError(EmgrtError, ValueError):
    """Input data or a file on disk violates the expected format."""


class NumericError(EmgrtError, ArithmeticError):
    """A numerical routine failed (singular system, non-convergence)."""
