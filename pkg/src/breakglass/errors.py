"""Exception types shared across the package."""


class BreakglassError(Exception):
    """Base class for all package errors."""


class DomainError(BreakglassError):
    """A value violates a domain invariant. Carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class DegenerateError(BreakglassError):
    """The requested analysis is degenerate (e.g. coincident cost lines)."""


class InsufficientDataError(BreakglassError):
    """Too few (or too degenerate) samples to estimate anything."""


class SchemaError(BreakglassError):
    """A tabular or structured input does not match the documented schema."""
