"""Exception types shared across the package.

Every error carries a machine-readable ``kind`` so the CLI can map failures
to stable exit codes without string matching.
"""


class ViscopathError(Exception):
    """Base class for package errors."""

    kind = "error"


class ValidationError(ViscopathError):
    """A value violates a documented invariant (bad field, bad range)."""

    kind = "validation"

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ParseError(ViscopathError):
    """A document could not be parsed at all (malformed JSON, wrong kind)."""

    kind = "parse"

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context


class NumericError(ViscopathError):
    """The integrator produced a non-finite value."""

    kind = "numeric"


class GenerationError(ViscopathError):
    """Scenario generation could not satisfy its constraints."""

    kind = "generation"
