"""Exception hierarchy for the solver."""

from __future__ import annotations


class KGBoundError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KGBoundError):
    """An input lies outside the physical or numerical domain."""


class BranchError(KGBoundError):
    """The centrifugal-like discriminant 1/4 + K(E) is negative, so no
    real branch of eta exists at this energy."""


class AbsentError(KGBoundError):
    """A requested spectral line (lower/upper) does not exist for the
    given parameters."""


class ConvergenceError(KGBoundError):
    """Root refinement failed to meet the requested tolerances.

    Carries the best iterate found so far, so callers can report how
    close the solver got.
    """

    def __init__(self, message, best_energy=None, best_residual=None, iterations=0):
        super().__init__(message)
        self.best_energy = best_energy
        self.best_residual = best_residual
        self.iterations = iterations


class EvaluationError(KGBoundError):
    """A special-function evaluation did not converge within its term cap."""
