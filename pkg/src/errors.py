"""Exception hierarchy for the daisy-chain scheduler."""

from typing import Optional


class SchedulerError(Exception):
    """Base class for every error raised by the scheduler."""


class InstanceError(SchedulerError):
    """An instance document violates a constraint at ingestion."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class PreconditionError(SchedulerError):
    """An operation was called on input that does not satisfy its precondition."""


class InternalInvariantError(SchedulerError):
    """A post-hoc check caught a construction bug."""


class SchemaMismatchError(SchedulerError):
    """A schedule and an instance do not describe the same streams."""


class UnsupportedFormatError(SchedulerError):
    def __init__(self, fmt: str, supported: Optional[tuple] = None):
        self.fmt = fmt
        hint = f" (supported: {', '.join(supported)})" if supported else ""
        super().__init__(f"Unsupported format '{fmt}'{hint}")


class GenerationError(SchedulerError):
    """Rejection sampling gave up before producing a feasible instance."""

    def __init__(self, attempts: int, message: str = ""):
        self.attempts = attempts
        super().__init__(
            message or f"Rejection sampling exhausted after {attempts} attempts"
        )
