"""Exception hierarchy shared by every evaluator."""

from __future__ import annotations


class ThermorateError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ThermorateError, ValueError):
    """Parameters outside the domain where the integral or formula is defined."""


class PoleError(DomainError):
    """Gamma-type argument sits on (or within tolerance of) a pole."""


class IrrationalCoefficientError(DomainError):
    """An H-function coefficient is not a ratio of small integers."""


class UnsupportedMultiplicityError(ThermorateError):
    """Three or more gamma ladders collide at one point (pole of order >= 3)."""


class ContourPlacementError(ThermorateError):
    """No vertical line separates the left and right pole sets."""


class NonConvergenceError(ThermorateError):
    """A series hit its term ceiling before the stopping rule fired."""


class DivergenceError(ThermorateError):
    """The validity condition for a series representation fails."""


class QuadratureBudgetError(ThermorateError):
    """Adaptive quadrature ran out of evaluations.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result
