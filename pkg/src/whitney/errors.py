"""Exception types shared across the package."""


class WhitneyError(Exception):
    """Base class for all library errors."""


class VariableMismatchError(WhitneyError):
    """Operands live over incompatible variable lists."""


class ChartMismatchError(WhitneyError):
    """A form, field or map was used on the wrong chart."""


class CapShortfallError(WhitneyError):
    """The truncation cap of an input is too small for the requested query."""


class CompletionError(WhitneyError):
    """Graph data (u, v) cannot be completed to an integral map."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or []


class NotIntegralError(WhitneyError):
    """A candidate map fails the integrality identity."""

    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


class CorankError(WhitneyError):
    """The differential at the origin drops rank by two or more."""


class NotClosedError(WhitneyError):
    """A 1-form expected to be closed within cap is not."""


class UncertifiedFieldError(WhitneyError):
    """An operation required a certified deformation field."""


class ParseError(WhitneyError):
    """Malformed expression or germ document."""
