"""Exception hierarchy shared by all modules."""


class QSTError(Exception):
    """Base class for every error raised by spinqst."""


class ValidationError(QSTError, ValueError):
    """An input violates a documented invariant."""


class InvalidLengthError(ValidationError):
    """Channel length is odd or non-positive."""


class NonPositiveCouplingError(ValidationError):
    """A coupling is zero, negative or not finite."""


class CouplingRangeError(ValidationError):
    """A coupling exceeds the J_max = 1 normalization."""


class DomainError(ValidationError):
    """A scalar parameter lies outside its admissible range."""


class UnsupportedConfigurationError(ValidationError):
    """The request is well formed but the configuration is not supported."""


class NumericalFailure(QSTError, ArithmeticError):
    """A numerical routine could not deliver a certified result."""


class ConvergenceError(NumericalFailure):
    """An iterative eigensolver hit its iteration cap."""


class ResonanceError(NumericalFailure):
    """A channel eigenvalue is too close to zero for an off-resonant sum."""
