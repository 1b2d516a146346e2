"""Exception hierarchy.

The CLI maps the three top-level families onto exit codes:
``ValidationError`` -> 1, ``BudgetExceeded`` -> 2, ``CyclicPriority`` -> 3.
"""

from __future__ import annotations


class PrefRepError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(PrefRepError):
    pass


class SchemaError(ValidationError):
    pass


class DataError(ValidationError):
    pass


class UnknownTupleId(ValidationError):
    pass


class AsymmetryViolation(ValidationError):
    pass


class NonConflictingPair(ValidationError):
    pass


class NotARepair(ValidationError):
    pass


class PriorityNotTotal(ValidationError):
    pass


class MalformedFormula(ValidationError):
    pass


class QueryError(ValidationError):
    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)
        self.pos = pos


class QuerySyntaxError(QueryError):
    pass


class ArityMismatch(QueryError):
    pass


class TypeMismatch(QueryError):
    pass


class FreeVariable(QueryError):
    pass


class BudgetExceeded(PrefRepError):
    pass


class InstanceTooLarge(BudgetExceeded):
    pass


class TooManyVariables(BudgetExceeded):
    pass


class CyclicPriority(PrefRepError):
    pass


class CyclicInput(CyclicPriority):
    pass
