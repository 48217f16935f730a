"""Exception hierarchy shared by the solvers."""


class FourShockError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FourShockError, ValueError):
    """An argument lies outside the domain of a formula."""


class ParameterDomainError(DomainError):
    """(gamma, v2, theta) outside the admissible parameter range."""


class DivergenceError(DomainError):
    """A quantity is infinite at the requested point (e.g. ell(0, 1) for gamma = 1)."""


class VacuumError(DomainError):
    """The requested state would require a density at or below vacuum."""


class SubsonicUpstreamError(DomainError):
    """A steady shock polar was requested for an upstream Mach number <= 1."""


class DetachmentError(FourShockError):
    """No regular reflection exists: the incident angle is at or beyond detachment."""


class ConsistencyError(FourShockError):
    """Inputs that should describe the same configuration disagree."""


class DetectionError(FourShockError):
    """No shock front could be located in a simulated field."""


class SimulationAbort(FourShockError):
    """The finite-volume update could not keep the density positive."""
