"""Exception hierarchy shared by all poalign modules."""

from __future__ import annotations


class PoalignError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PoalignError):
    """An argument or document violates a structural invariant."""


class FamilyMismatchError(ValidationError):
    """An order does not belong to the family required by an operation."""


class MarkerSetMismatchError(ValidationError):
    """Two values that must share a marker set do not."""


class DegreeError(ValidationError):
    """A graph exceeds the maximum degree allowed by an operation."""


class SizeExceededError(ValidationError):
    """An input is too large for an exhaustive computation."""


class OccurrenceCountError(ValidationError):
    """A 2SAT variable does not occur in exactly three clauses."""


class DuplicateVariableError(ValidationError):
    """A 2SAT clause mentions the same variable twice."""


class PolarityError(ValidationError):
    """A 2SAT variable has all-positive or all-negative literals."""


class ParseError(ValidationError):
    """A document failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapExceededError(PoalignError):
    """An enumeration or search exceeded its work cap.

    Attributes:
        count: work units (extensions or solver states) spent before giving up.
        best: best solution found so far, if any.
    """

    def __init__(self, message: str, count: int, best=None):
        super().__init__(message)
        self.count = count
        self.best = best
