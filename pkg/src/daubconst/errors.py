"""Exception types shared across the package."""


class DaubconstError(Exception):
    """Base class for all errors raised by daubconst."""


class DomainError(DaubconstError, ValueError):
    """Parameters lie outside the domain of a closed-form expression."""


class PreconditionError(DaubconstError, ValueError):
    """An operation was called on an object that lacks required data."""


class UnsupportedOrderError(DaubconstError, ValueError):
    """The filter order is outside the range an operation supports."""


class FactorizationError(DaubconstError, ArithmeticError):
    """Spectral factorization did not reproduce the target magnitude."""


class ConvergenceError(DaubconstError, ArithmeticError):
    """A quadrature failed to reach its tolerance.

    The partial result is kept on ``result`` so callers can still report it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
