"""Exception types shared across the solver."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid or unparsable run configuration."""


class SingularSystemError(ArithmeticError):
    """A (near-)zero pivot was met while solving a linear system."""


class ConvergenceError(ArithmeticError):
    """An iterative evaluation did not reach its tolerance."""


class StepError(RuntimeError):
    """A time step failed; ``step`` holds the failing index."""

    def __init__(self, step: int, cause: Exception):
        super().__init__(f"time step {step} failed: {cause}")
        self.step = step
        self.cause = cause
