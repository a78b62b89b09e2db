"""Exception hierarchy shared by every package.

The CLI maps these onto exit codes: DomainError and ConstraintViolation are
usage errors (2), NumericalFailure is a numerical failure (3).
"""

from typing import Optional


class SharpMtgError(Exception):
    """Base class for all errors raised by this project."""


class DomainError(SharpMtgError, ValueError):
    """An argument lies outside the range where a computation is defined."""


class NumericalFailure(SharpMtgError, RuntimeError):
    """A numerical method could not produce a trustworthy result."""


class SeriesConvergenceError(NumericalFailure):
    """The f1 series did not meet its truncation bound within the term cap."""


class IntegrationError(NumericalFailure):
    """The ODE integrator or quadrature routine gave up before the target."""


class BracketError(NumericalFailure):
    """No sign change was found where one must exist."""


class NonFinitePathError(NumericalFailure):
    """A simulated path produced inf or nan."""

    def __init__(self, message: str, batch: int, step: int, path: Optional[int] = None):
        super().__init__(message)
        self.batch = batch
        self.step = step
        self.path = path


class ConstraintViolation(SharpMtgError, ValueError):
    """A strategy produced an increment frame outside the admissible set."""

    def __init__(self, message: str, path: int, residuals: dict[str, float]):
        super().__init__(message)
        self.path = path
        self.residuals = residuals


class VerificationFailure(SharpMtgError):
    """Raised on request when a verification report contains failed checks."""

    def __init__(self, message: str, failed: list[str]):
        super().__init__(message)
        self.failed = failed
