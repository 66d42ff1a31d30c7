"""Exception hierarchy shared by all modules."""


class UpconvError(Exception):
    """Base class for library errors."""


class DomainError(UpconvError, ValueError):
    """An argument lies outside the domain where a model is defined."""


class ValidationError(UpconvError, ValueError):
    """A configuration or value object violates its invariants."""


class NoPhaseMatchError(UpconvError):
    """No first-order quasi-phase-matching solution exists."""


class FitError(UpconvError):
    """A curve fit could not be set up or did not converge."""


class CalibrationError(UpconvError, ValueError):
    """A calibration point cannot be inverted."""


class ResourceError(UpconvError):
    """A request would exceed the resource limits of a simulation."""
