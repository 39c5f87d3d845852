"""Shared exception types for the aegis package."""


class AegisError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AegisError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonConvergenceError(AegisError, RuntimeError):
    """An iterative routine exhausted its budget before reaching tolerance.

    Carries the best available answer so callers can decide whether the
    partial result is usable.
    """

    def __init__(self, message, *, estimate=None, error_bound=None, best_point=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
        self.best_point = best_point


class ConfigError(AegisError, ValueError):
    """A scenario configuration is malformed or violates a model invariant."""

    def __init__(self, message, *, key=None, line=None):
        self.key = key
        self.line = line
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if key is not None:
            parts.append(key)
        parts.append(message)
        super().__init__(": ".join(parts))
