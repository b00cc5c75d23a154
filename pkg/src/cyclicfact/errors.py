"""Exception hierarchy shared by every layer of the toolkit."""

from __future__ import annotations


class CyclicFactError(Exception):
    """Base class for all errors raised by cyclicfact."""


class StructuralError(CyclicFactError, IndexError):
    """An element index or table shape is invalid for the group at hand."""


class ValidationError(CyclicFactError, ValueError):
    """Parameters are outside the documented domain."""


class CapacityError(CyclicFactError):
    """A configured size limit (group order, subgroup count) was exceeded."""


class ConsistencyError(CyclicFactError):
    """Two computations that must agree did not. Always indicates a bug."""


class SpecParseError(ValidationError):
    """A group spec string could not be parsed."""

    def __init__(self, text: str, position: int, expected: str):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(
            f"cannot parse {text!r} at position {position}: expected {expected}"
        )
