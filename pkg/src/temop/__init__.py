"""Multi-lag-order probabilistic trend forecasting for univariate series."""

from .errors import (
    CorruptModelError,
    CsvFormatError,
    InsufficientDataError,
    InsufficientHistoryError,
    InvalidInputError,
    ModelFileError,
    TemopError,
    UndefinedMetricError,
    UnsupportedVersionError,
)
from .infer import ScoreBreakdown, classify, predict_proba
from .series import TimeSeries, make_windows, overlap, trend_encode_scalar, trend_encode_window
from .train import TemopModel, train

__all__ = [
    "CorruptModelError",
    "CsvFormatError",
    "InsufficientDataError",
    "InsufficientHistoryError",
    "InvalidInputError",
    "ModelFileError",
    "ScoreBreakdown",
    "TemopError",
    "TemopModel",
    "TimeSeries",
    "UndefinedMetricError",
    "UnsupportedVersionError",
    "classify",
    "make_windows",
    "overlap",
    "predict_proba",
    "train",
    "trend_encode_scalar",
    "trend_encode_window",
]
