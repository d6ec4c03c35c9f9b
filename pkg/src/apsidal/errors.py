"""Exception hierarchy shared by all modules."""


class ApsidalError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ApsidalError, ValueError):
    """An input lies outside the domain of an operation."""


class DegenerateOrbitError(DomainError):
    """The orbit is (numerically) circular: the apsides coincide."""


class UnboundedOrbitError(DomainError):
    """The energy is at or above the supremum of the bounded-orbit window."""


class InfeasibleApsidesError(DomainError):
    """A pair of apsidal radii does not correspond to any bounded orbit."""


class UnsupportedExponentError(DomainError):
    """The exponent is outside the range a criterion can handle."""


class NumericalError(ApsidalError):
    """A numerical procedure failed to deliver a trustworthy result."""


class IntegrandError(NumericalError):
    """The regularized integrand went non-positive (bad turning points)."""


class ConvergenceError(NumericalError):
    """Quadrature refinement budget exhausted.

    The best available estimate is kept on ``best`` (an ApsidalResult).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class IntegratorError(NumericalError):
    """The ODE integration failed (step budget, energy drift, no event)."""


class StateError(ApsidalError):
    """An object is not in the state required by the requested operation."""
