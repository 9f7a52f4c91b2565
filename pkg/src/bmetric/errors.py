"""Exception types shared across the package."""

from __future__ import annotations


class StructureError(ValueError):
    """Inputs are structurally incompatible (shapes, parameter sets, bindings)."""


class PolyParseError(StructureError):
    """Malformed polynomial text. ``pos`` is the 0-based offset of the fault."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class SlotKindError(StructureError):
    """A slot has the wrong variance for the requested operation."""


class PreconditionError(Exception):
    """A class-membership precondition does not hold.

    The offending classification report travels with the exception so the
    caller can show which identity failed and where.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ConsistencyError(RuntimeError):
    """Two independent constructions of the same object disagree."""
