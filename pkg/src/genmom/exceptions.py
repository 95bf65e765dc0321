"""Error types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument has the wrong shape, a non-finite entry, or an out-of-range value."""


class InfeasibleScheduleError(InvalidArgumentError):
    """The step-size recurrence has no positive solution for the given parameters."""


class RootFindingError(RuntimeError):
    """The safeguarded Newton iteration for a step size did not converge."""


class InvalidConfigError(ValueError):
    """A run configuration is malformed or describes an unsupported combination."""


class UnsupportedGeometryError(InvalidConfigError):
    """The requested method is not defined for the chosen norm or feasible set."""


class DivergenceError(RuntimeError):
    """An iterate became non-finite or left the region where the objective is valid.

    Attributes
    ----------
    k : int
        Iteration (or integration step) at which the failure was detected.
    state : object
        Last state that was still valid, if available.
    trace : object
        Partial trace up to the failure, if available.
    """

    def __init__(self, message, k=None, state=None, trace=None):
        super().__init__(message)
        self.k = k
        self.state = state
        self.trace = trace


class BoxExitError(DivergenceError):
    """An iterate left the box on which a nonconvex objective's constants hold."""
