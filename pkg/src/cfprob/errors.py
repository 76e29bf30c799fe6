"""Exception hierarchy shared by every module of the engine."""

from __future__ import annotations


class CausalError(Exception):
    """Base class for all errors raised by cfprob."""


class InvalidModelError(CausalError, ValueError):
    """A model, signature, graph, table or assignment is malformed."""


class ConstraintViolationError(InvalidModelError):
    """A response distribution does not reproduce a conditional table row."""

    def __init__(self, variable: str, parent_values: tuple, value: str, expected, actual) -> None:
        self.variable = variable
        self.parent_values = parent_values
        self.value = value
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"response distribution for {variable} violates row "
            f"P({variable}={value} | {parent_values}): expected {expected}, got {actual}"
        )


class UndefinedConditionalError(CausalError):
    """Conditioning on an event (or world) of probability zero."""


class ModelTooLargeError(CausalError):
    """A state space, response space or vertex count exceeds its cap."""


class UnsupportedQueryError(CausalError):
    """The query is well formed but not defined for the requested semantics."""


class QuerySyntaxError(CausalError, ValueError):
    """Query text does not match the grammar, or names an unknown variable/value."""

    def __init__(self, message: str, position: int | None = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ModelFileError(CausalError, ValueError):
    """A model or SCM file cannot be read or decoded."""
