"""Exception hierarchy shared by all modules."""


class KineticCaseError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KineticCaseError, ValueError):
    """An argument lies outside the set where the operation is defined."""


class CutError(DomainError):
    """A point lies on a branch cut where only boundary values exist."""


class EndpointError(DomainError):
    """A point coincides with an endpoint of the spectrum interval."""


class AccuracyError(KineticCaseError):
    """An adaptive routine stopped before reaching its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class BranchError(KineticCaseError):
    """The argument of a boundary value could not be followed continuously."""


class ConsistencyError(KineticCaseError):
    """Two quantities that must agree analytically disagree numerically."""


class ConstructionError(KineticCaseError):
    """A solver refuses to build an object that fails its self-checks."""


class IterationError(KineticCaseError):
    """A fixed-point iteration did not converge."""

    def __init__(self, message, spectral_radius=None):
        super().__init__(message)
        self.spectral_radius = spectral_radius


class NonAsymptoticError(KineticCaseError):
    """A far-field fit shows the solution has not reached its asymptote."""
