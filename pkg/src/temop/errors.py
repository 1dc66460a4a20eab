"""Exception hierarchy shared by every temop module."""


class TemopError(Exception):
    """Base class for all library errors."""


class InvalidInputError(TemopError, ValueError):
    """An argument violates a precondition (non-finite value, bad shape, ...)."""


class InsufficientDataError(TemopError):
    """Not enough observations to build the requested object."""


class InsufficientHistoryError(InsufficientDataError):
    """Prediction history is shorter than the model's maximum lag order."""

    def __init__(self, required: int, got: int):
        self.required = required
        self.got = got
        super().__init__(f"need at least q={required} history values, got {got}")


class UndefinedMetricError(TemopError):
    """A metric is mathematically undefined for the given input."""


class CsvFormatError(TemopError):
    """A price CSV could not be parsed."""


class ModelFileError(TemopError):
    """Base class for model persistence failures."""


class CorruptModelError(ModelFileError):
    """Model file is truncated, malformed or fails its checksum."""


class UnsupportedVersionError(ModelFileError):
    """Model file was written with a format version this build cannot read."""
