"""Exception types shared by the public API."""

from __future__ import annotations


class LieIsoError(Exception):
    """Base class for all errors raised by this package."""


class RangeError(LieIsoError):
    """A metric parameter falls outside its catalog range."""


class NonPositiveDefiniteError(LieIsoError):
    """A Gram matrix is not symmetric positive definite."""


class DegenerateFormError(LieIsoError):
    """A symmetric form handed to the skew-algebra solver is singular."""

    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


class UnsupportedFamilyError(LieIsoError):
    """An operation needs a catalog family (I or c) but got a custom algebra."""


class InternalConsistencyError(LieIsoError):
    """A structural invariant failed (e.g. a symmetry index of 2)."""
