"""Exception and warning types shared across the package."""

from __future__ import annotations


class OcmonError(Exception):
    """Base class for every error raised by this package."""


# -- event-log construction ------------------------------------------------

class DuplicateIdError(OcmonError):
    """An event or object identifier occurs more than once."""


class DanglingReferenceError(OcmonError):
    """A relation pair names an event or object that does not exist."""


class MissingFieldError(OcmonError):
    """A mandatory field (id, activity, timestamp, object type) is absent."""


class UnknownIdError(OcmonError):
    """A lookup used an event or object id that is not in the log."""


class InvalidWindowError(OcmonError):
    """A time window has its lower bound after its upper bound."""


# -- import / export -------------------------------------------------------

class ParseError(OcmonError):
    """Input bytes could not be parsed as the expected format."""


class SchemaError(OcmonError):
    """Parsed input is structurally valid but misses required keys."""


class TimestampError(OcmonError):
    """A timestamp string does not match the expected format."""


class ColumnMissingError(OcmonError):
    """A column named in the CSV spec is absent from the header."""


class TypeConflictError(OcmonError):
    """The same object id was mentioned under two different object types."""


# -- metrics ----------------------------------------------------------------

class UnknownTypeError(OcmonError):
    """An object type required by a metric is not present in the log."""


class UnknownActivityError(OcmonError):
    """An activity required by a metric is not present in the log."""


class UnknownMeasureError(OcmonError):
    """A performance measure name is not in the measure registry."""


class UndefinedMeasureError(OcmonError):
    """A measure has no value on this log (e.g. no event has an enabler)."""


# -- constraint graphs ------------------------------------------------------

class DslSyntaxError(OcmonError):
    """Constraint text could not be tokenized or parsed.

    Carries the 1-based ``line`` and ``column`` of the offending input.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InvalidGraphError(OcmonError):
    """A constraint graph breaches a structural invariant.

    ``diagnostics`` holds the individual findings when available.
    """

    def __init__(self, message: str, diagnostics: tuple = ()):
        super().__init__(message)
        self.diagnostics = tuple(diagnostics)


class OcelWarning(UserWarning):
    """Non-fatal oddity noticed while building or importing a log."""
