"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ArithnumError(Exception):
    """Base class for all library errors."""


class PreconditionError(ArithnumError, ValueError):
    """An argument violates the documented precondition of an operation."""


class NotCoprimeError(PreconditionError):
    """A multiplicative order or valuation was requested for non-coprime inputs."""


class ParseError(PreconditionError):
    """Factored-form text does not match ``p1^e1 * p2^e2 * ...``."""


class BudgetExceeded(ArithnumError):
    """Work cap exhausted before the computation could finish.

    ``found`` holds the prime powers recovered so far and ``cofactors`` the
    composite parts that were never split, so callers can still use the
    partial result.
    """

    def __init__(self, message: str, found: dict[int, int] | None = None,
                 cofactors: list[int] | None = None) -> None:
        super().__init__(message)
        self.found = dict(found or {})
        self.cofactors = list(cofactors or [])


class ConsistencyError(ArithnumError, AssertionError):
    """An internal identity failed; signals an implementation bug."""


class CyclotomicConsistencyError(ConsistencyError):
    """A prime factor of a cyclotomic value fits neither intrinsic nor primitive."""

    def __init__(self, message: str, violations: list | None = None) -> None:
        super().__init__(message)
        self.violations = list(violations or [])
