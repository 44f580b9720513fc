"""Exception hierarchy shared by the solver modules."""


class PPTError(Exception):
    """Base class for every error raised by pptdimer."""


class DomainError(PPTError, ValueError):
    """An argument lies outside the domain of the operation."""


class HypothesisViolation(PPTError, ValueError):
    """The recurrence needs every superdiagonal entry to be nonzero."""


class SolverError(PPTError, RuntimeError):
    """A numerical step failed to reach its accuracy target."""


class ConvergenceError(SolverError):
    """Root iteration stopped at ``max_iter`` before every root settled.

    ``best`` holds the last iterate and ``residuals`` the backward error of
    each entry, so callers can still inspect a partial answer.
    """

    def __init__(self, message, best=(), residuals=()):
        super().__init__(message)
        self.best = list(best)
        self.residuals = list(residuals)


class PairingError(SolverError):
    """Non-real roots of a real characteristic polynomial failed to pair up."""
