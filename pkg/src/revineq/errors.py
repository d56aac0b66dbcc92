"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: precondition/contract violations exit
with 2, arithmetic impossibilities (division by zero, no finite constant,
no admissible ray) with 3, malformed input with 1.
"""
from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all package errors."""


class PreconditionError(ToolkitError):
    """A stated precondition (index multiple, exponent range, ...) is violated."""


class InvalidRangeError(PreconditionError):
    """An index range is empty, reversed, or falls outside a sequence."""


class BadExponentError(PreconditionError):
    """An exponent is outside the range an operation supports."""


class NotDecreasingError(PreconditionError):
    """A sequence that must be non-negative decreasing is not."""


class IncompleteProfileError(PreconditionError):
    """A sequence profile lacks the direction or constants a factor needs."""


class MissingGeometricConstantError(PreconditionError):
    """A certificate that needs a geometric partial-sum constant was not given one."""


class BadConstantError(PreconditionError):
    """A supplied constant is outside its admissible range."""


class SearchSpaceTooLargeError(PreconditionError):
    """A brute-force enumeration would exceed the configured budget."""


class ArithmeticImpossibleError(ToolkitError):
    """No finite answer exists (division by zero and friends)."""


class ZeroDyadicEntryError(ArithmeticImpossibleError):
    """A dyadic entry is zero where a positive one is required: no finite ratio."""


class NoAdmissibleRayError(ArithmeticImpossibleError):
    """Every candidate extreme ray has a vanishing comparison side."""


class InputFormatError(ToolkitError):
    """Malformed user input (CLI or serialized payloads)."""
