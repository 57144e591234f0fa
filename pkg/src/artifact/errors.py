"""Exception types shared across the package."""


class InvalidParameters(ValueError):
    """Raised when a bracket, model or field is configured with unusable values."""


class PrecisionUnreachable(ArithmeticError):
    """Raised when a truncated series cannot reach the requested precision."""


class PoleProximity(ArithmeticError):
    """A denominator came within the guard threshold of zero.

    Samplers catch this and draw a fresh point; callers evaluating at a
    fixed point see it as an error.
    """


class DimensionMismatch(ValueError):
    """Operators with different variable counts or shift units were combined."""


class ExactnessViolation(ArithmeticError):
    """An exact polynomial division left a nonzero remainder.

    This always signals a bug in operator application, never bad input.
    """


class DegenerateSpectrum(ArithmeticError):
    """The triangular eigenvector system is singular at the chosen (q, t)."""


class Divergence(ValueError):
    """An infinite product or series was requested outside its convergence region."""
