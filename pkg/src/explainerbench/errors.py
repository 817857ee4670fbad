"""Exception types shared across the benchmark."""


class BenchmarkError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(BenchmarkError, ValueError):
    """A generator, trainer, or estimator received an out-of-range parameter."""


class DataFormatError(BenchmarkError):
    """An external file could not be parsed; the message carries the location."""


class MissingColumnError(DataFormatError):
    """A required column is absent from a loaded table."""

    def __init__(self, column: str):
        super().__init__(f"required column {column!r} is missing")
        self.column = column


class MagicNumberError(DataFormatError):
    """An IDX file does not start with the expected magic number."""


class LengthMismatchError(DataFormatError):
    """Paired image/label files disagree on record count."""


class ArityMismatchError(BenchmarkError, ValueError):
    """A formula or model was applied to data of the wrong width."""


class UnknownFormulaError(BenchmarkError, KeyError):
    """The requested closed-form function is not registered."""


class DimensionTooLargeError(BenchmarkError):
    """Exact enumeration was requested beyond its feature-count bound."""


class StructureMissingError(BenchmarkError):
    """A tree explainer was invoked on a model without tree structure."""


class MissingTargetsError(BenchmarkError):
    """A loss-based explainer needs targets the evaluation set does not carry."""


class SetupFailureError(BenchmarkError):
    """A test precondition (exact fit, loss threshold, pinned shape) failed."""


class UnknownIdError(BenchmarkError, KeyError):
    """A test or explainer id is not present in the registry."""


class EmptyInputError(BenchmarkError, ValueError):
    """An aggregation was asked to summarize zero completed results."""


class ArchiveSchemaError(BenchmarkError):
    """A results archive does not match the published schema."""
