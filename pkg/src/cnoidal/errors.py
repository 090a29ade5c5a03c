"""Exception hierarchy shared by every module.

Domain errors derive from ``ValueError`` and numerical failures from
``ArithmeticError`` so callers (and the CLI exit-code mapping) can catch
either family without importing the concrete classes.
"""


class CnoidalError(Exception):
    """Base class for all package errors."""


class DomainError(CnoidalError, ValueError):
    """An argument lies outside the documented domain."""


class NumericalError(CnoidalError, ArithmeticError):
    """A numerical procedure failed to deliver a trustworthy answer."""


class IntegrationError(NumericalError):
    """Adaptive ODE integration could not reach the end of the interval."""

    def __init__(self, message, x_reached):
        super().__init__(f"{message} (last x reached: {x_reached!r})")
        self.x_reached = x_reached


class BracketError(NumericalError):
    """The supplied interval does not certify a sign change."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge; ``estimate`` is the best value."""

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error~{error!r})")
        self.estimate = estimate
        self.error = error


class DegenerateThetaError(NumericalError):
    """|theta| fell below the trust threshold, so no index can be inferred."""


class UnresolvedZeroError(NumericalError):
    """Zero counting hit a cell whose sign pattern is not a simple crossing."""


class PremiseViolation(NumericalError):
    """A computed sign or count contradicts the expected spectral pattern."""
