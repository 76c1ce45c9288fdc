"""Exception hierarchy for the engine.

Every failure mode a caller may want to branch on gets its own class; the CLI
maps these onto process exit codes (see cli.py)."""

from __future__ import annotations


class BerkdynError(Exception):
    """Base class for all engine errors."""


class InputSyntaxError(BerkdynError):
    """Malformed polynomial/series input text."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)


class PreconditionError(BerkdynError):
    """An operation was called outside its stated domain."""


class IndeterminateOrderError(BerkdynError):
    """A result depends on series terms beyond the stored precision.

    Raised instead of guessing: a truncated series with no stored terms is
    only "zero to precision", and any decision that hinges on deeper terms
    must fail loudly."""


class ApproximateZeroError(IndeterminateOrderError):
    """Inversion (or division) by a series indistinguishable from zero."""


class NeedsExtensionError(BerkdynError):
    """The computation leaves the rational-coefficient Puiseux field.

    Carries the offending residual polynomial (integer coefficients, low to
    high degree) so callers can report exactly which splitting failed."""

    def __init__(self, message: str, residual: tuple[int, ...] | None = None):
        self.residual = residual
        if residual is not None:
            message = f"{message} [residual coefficients {list(residual)}]"
        super().__init__(message)


class PrecisionExhaustedError(BerkdynError):
    """Root lifting hit its step cap before reaching the target precision."""


class BudgetExhaustedError(BerkdynError):
    """An iterative search ran out of its configured budget."""

    def __init__(self, message: str, budget: int | None = None):
        self.budget = budget
        super().__init__(message)


class ChainExitError(BerkdynError):
    """A tracked point left the dynamical level tree (it is not in the
    bounded region); reports the first level at which this happened."""

    def __init__(self, level: int, message: str | None = None):
        self.level = level
        super().__init__(message or f"point exits the level tree at level {level}")


class InvariantViolationError(BerkdynError):
    """An internal runtime invariant failed; indicates an engine bug or a
    breached design justification, never bad user input."""
