"""Exception hierarchy shared across the package."""


class TableSynthError(Exception):
    """Base class for all errors raised by tablesynth."""


class SchemaError(TableSynthError):
    """A schema is malformed or an operation violates schema constraints."""


class RowLookupError(TableSynthError):
    """A row handle does not refer to a row of the table."""


class IntRangeError(TableSynthError):
    """An integer escaped the signed 64-bit range."""


class FeatureMissError(TableSynthError):
    """A string feature matched nowhere; the feature is inapplicable to the row."""


class ValidationFailure(TableSynthError):
    """A program failed static validation; carries the structured violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        msg = "; ".join(f"[{v.rule}] {v.message}" for v in self.violations)
        super().__init__(msg or "invalid program")


class ProgramParseError(TableSynthError):
    """The canonical program text could not be parsed."""


class BenchmarkFormatError(TableSynthError):
    """A benchmark file is malformed or internally inconsistent."""


class EngineInternalError(TableSynthError):
    """The synthesizer produced a program that failed its own verification."""
