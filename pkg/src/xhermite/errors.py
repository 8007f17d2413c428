"""Exception types raised across the package."""

from __future__ import annotations


class XHermiteError(Exception):
    """Base class for all package errors."""


class ArgumentError(XHermiteError, ValueError):
    pass


class PartitionValidationError(XHermiteError, ValueError):
    pass


class InfeasibleGapSetError(XHermiteError, ValueError):
    """A proposed gap set does not come from any partition.

    ``reason`` is one of ``"duplicate"``, ``"negative"``, ``"sum_mismatch"``
    or ``"non_monotone"``.
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class GapDegreeError(XHermiteError, ValueError):
    """Requested degree belongs to the exceptional (missing) set."""

    def __init__(self, n: int, message: str | None = None):
        super().__init__(message or f"degree {n} is exceptional for this partition")
        self.n = n


class AdmissibilityError(XHermiteError, ValueError):
    """Operation requires an even partition."""


class InconsistencyError(XHermiteError, AssertionError):
    """An identity that must hold exactly produced a non-zero residual.

    The offending residual is kept on ``residual`` for diagnosis.
    """

    def __init__(self, message: str, residual=None):
        super().__init__(message if residual is None else f"{message}: residual = {residual}")
        self.residual = residual
