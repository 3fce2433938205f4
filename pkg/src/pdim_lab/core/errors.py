"""Exception types shared by the lab modules."""

from __future__ import annotations


class LabError(Exception):
    """Base class for every error raised by pdim_lab."""


class UsageError(LabError, ValueError):
    """A precondition of an operation was violated."""


class CapExceededError(LabError):
    """An enumeration outgrew its configured cap.

    Attributes:
        cap: The cap that was hit.
        partial: Per-radius sphere counts (or per-depth totals) computed before the cap.
    """

    def __init__(self, message: str, *, cap: int, partial: tuple[int, ...] = ()) -> None:
        super().__init__(message)
        self.cap = cap
        self.partial = partial
