"""Shared exception types."""

from __future__ import annotations


class TclpError(Exception):
    """Base class for all engine/frontend errors."""


class LoadError(TclpError):
    """Program text could not be loaded (syntax, directives, constraint shape)."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class EngineError(TclpError):
    """Runtime error during resolution (instantiation, bad goal, ...)."""


class BudgetExhausted(TclpError):
    """Raised when the scheduler step budget runs out."""

    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"step budget exhausted after {steps} steps")
