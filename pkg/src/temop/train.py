"""Model fitting: trend-pattern partitions, per-class statistics, adaptive max lag."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InsufficientDataError, InvalidInputError
from .series import UP, TimeSeries, TrendPattern, Window, make_windows, trend_encode_window

logger = logging.getLogger(__name__)

DEFAULT_M = 50
DEFAULT_LAMBDA = 0.1
DEFAULT_LAG_CAP = 30
STD_FLOOR = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ClassStats:
    """Statistics of one label class (up or down) inside a pattern subset.

    ``mean``/``std`` are the per-feature z-scoring parameters in price units,
    ``inv_cov`` the inverse of the ridge-regularised covariance of the
    z-scored samples. All three are ``None`` when ``count == 0``.
    """

    count: int
    mean: np.ndarray | None = None
    std: np.ndarray | None = None
    inv_cov: np.ndarray | None = None

    @property
    def empty(self) -> bool:
        return self.count == 0

    @property
    def dim(self) -> int | None:
        return None if self.mean is None else len(self.mean)

    def __eq__(self, other):
        if not isinstance(other, ClassStats):
            return NotImplemented
        if self.count != other.count:
            return False
        if self.empty:
            return other.empty
        return (
            np.array_equal(self.mean, other.mean)
            and np.array_equal(self.std, other.std)
            and np.array_equal(self.inv_cov, other.inv_cov)
        )


@dataclass(frozen=True)
class SubsetModel:
    """All windows of one lag sharing a trend pattern, split by label trend."""

    pattern: TrendPattern
    total: int
    plus: ClassStats
    minus: ClassStats


@dataclass(frozen=True)
class LagModel:
    lag: int
    subsets: tuple[SubsetModel, ...]

    @property
    def n_windows(self) -> int:
        return sum(s.total for s in self.subsets)

    @property
    def min_support(self) -> int:
        return min(s.total for s in self.subsets)


@dataclass(frozen=True)
class TemopModel:
    m: int
    q: int
    lam: float
    lag_models: tuple[LagModel, ...]
    train_len: int

    def __post_init__(self):
        lags = [lm.lag for lm in self.lag_models]
        if lags != list(range(1, self.q + 1)):
            raise InvalidInputError(f"lag models must cover 1..{self.q}, got {lags}")


def partition_by_pattern(windows: Sequence[Window]) -> dict[TrendPattern, list[Window]]:
    """Bucket windows by the trend pattern of their inputs.

    Keys come back sorted so downstream iteration order is reproducible.
    """
    buckets: dict[TrendPattern, list[Window]] = defaultdict(list)
    lags = set()
    for w in windows:
        lags.add(len(w.x))
        buckets[trend_encode_window(w.x)].append(w)
    if len(lags) > 1:
        raise InvalidInputError(f"windows of mixed lag orders: {sorted(lags)}")
    return {k: buckets[k] for k in sorted(buckets)}


def fit_class_stats(samples: Sequence[np.ndarray] | np.ndarray, lam: float = DEFAULT_LAMBDA) -> ClassStats:
    """Z-score the samples feature-wise and invert their regularised covariance.

    The std uses divisor ``count - 1`` and is floored at ``STD_FLOOR``; a single
    sample gets the floor as std and a zero covariance, so the inverse is
    ``E / lam``.
    """
    if lam <= 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")
    X = np.asarray(samples, dtype=float)
    if X.size == 0:
        return ClassStats(0)
    if X.ndim != 2:
        raise InvalidInputError(f"samples must form a 2-d array, got shape {X.shape}")
    count, dim = X.shape
    mean = X.mean(axis=0)
    if count > 1:
        std = np.maximum(X.std(axis=0, ddof=1), STD_FLOOR)
        Z = (X - mean) / std
        cov = np.atleast_2d(np.cov(Z, rowvar=False, ddof=1))
    else:
        std = np.full(dim, STD_FLOOR)
        cov = np.zeros((dim, dim))
    reg = cov + lam * np.eye(dim)
    inv_cov = np.linalg.inv(reg)
    # lam*E bounds the spectrum away from zero, so this only trips on NaNs
    assert np.all(np.isfinite(inv_cov)), "regularised covariance is singular"
    return ClassStats(count, _readonly(mean), _readonly(std), _readonly(inv_cov))


def check_min_support(lag_partition: Mapping[TrendPattern, Sequence], m: int) -> bool:
    """True iff every observed bucket holds at least ``m`` windows."""
    if not lag_partition:
        raise InvalidInputError("empty partition")
    return all(len(bucket) >= m for bucket in lag_partition.values())


def fit_lag(partition: Mapping[TrendPattern, Sequence[Window]], lag: int, lam: float) -> LagModel:
    subsets = []
    for pattern, bucket in partition.items():
        plus = [w.x for w in bucket if w.y_trend == UP]
        minus = [w.x for w in bucket if w.y_trend != UP]
        subsets.append(
            SubsetModel(
                pattern=pattern,
                total=len(bucket),
                plus=fit_class_stats(plus, lam),
                minus=fit_class_stats(minus, lam),
            )
        )
    return LagModel(lag, tuple(subsets))


def train(
    series: TimeSeries,
    m: int = DEFAULT_M,
    lam: float = DEFAULT_LAMBDA,
    lag_cap: int = DEFAULT_LAG_CAP,
) -> TemopModel:
    """Fit a model, growing the lag order while every observed pattern has m samples.

    The first lag whose partition has a bucket smaller than ``m`` stops the
    search and ``q`` is the lag before it. ``lag_cap`` bounds the search for
    series (e.g. monotone ones) whose support never shrinks.
    """
    if not isinstance(series, TimeSeries):
        series = TimeSeries(series)
    if m < 1:
        raise InvalidInputError(f"m must be >= 1, got {m}")
    if lag_cap < 1:
        raise InvalidInputError(f"lag_cap must be >= 1, got {lag_cap}")
    n = len(series)
    if n < m + 2:
        raise InsufficientDataError(f"training needs at least m + 2 = {m + 2} values, got {n}")

    lag_models = []
    for lag in range(1, lag_cap + 1):
        if n < lag + 1:
            break
        partition = partition_by_pattern(make_windows(series, lag))
        if not check_min_support(partition, m):
            logger.debug("lag %d fails support (min bucket %d < %d)", lag,
                         min(len(b) for b in partition.values()), m)
            break
        lag_models.append(fit_lag(partition, lag, lam))

    if not lag_models:
        raise InsufficientDataError(f"lag 1 has fewer than m={m} windows")
    return TemopModel(m=m, q=len(lag_models), lam=lam, lag_models=tuple(lag_models), train_len=n)
