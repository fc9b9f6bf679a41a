"""Exception types shared across the package."""

from __future__ import annotations


class SfilesError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(SfilesError):
    """A JSON document does not match the graph interchange schema."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class GraphInvariantError(SfilesError):
    """A mutation would leave the graph structurally invalid."""


class EncodeError(SfilesError):
    """The graph cannot be rendered in the requested notation."""


class ParseError(SfilesError):
    """An SFILES string could not be parsed; carries the diagnostics."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
