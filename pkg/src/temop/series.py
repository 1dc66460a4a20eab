"""Series containers, trend encoding and sliding-window construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InsufficientDataError, InvalidInputError

UP = 1
DOWN = -1

TrendPattern = tuple[int, ...]


def _frozen_array(values, ndim: int = 1) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise InvalidInputError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered real observations, optionally tagged with ISO dates.

    ``values`` is stored as a read-only float array. ``labels`` (if given)
    must align with ``values`` and be strictly increasing as dates.
    """

    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(self.values):
                raise InvalidInputError(
                    f"{len(labels)} labels for {len(self.values)} values"
                )
            try:
                days = [date.fromisoformat(s) for s in labels]
            except ValueError as exc:
                raise InvalidInputError(f"labels must be ISO dates: {exc}") from None
            for k in range(1, len(days)):
                if days[k] <= days[k - 1]:
                    raise InvalidInputError(
                        f"labels not strictly increasing at position {k}: "
                        f"{labels[k - 1]} -> {labels[k]}"
                    )
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.values, other.values)

    def __getitem__(self, item: slice) -> "TimeSeries":
        if not isinstance(item, slice):
            raise TypeError("TimeSeries supports slicing only; use .values[k]")
        labels = None if self.labels is None else self.labels[item]
        return TimeSeries(self.values[item], labels)

    def affine(self, scale: float, shift: float) -> "TimeSeries":
        return TimeSeries(scale * self.values + shift, self.labels)


class Window(NamedTuple):
    """One training sample: ``x`` (lag values), label value ``y`` and its trend."""

    x: np.ndarray
    y: float
    y_trend: int


def trend_encode_scalar(prev: float, cur: float) -> int:
    """+1 if ``cur >= prev`` else -1. Ties are up."""
    if not (math.isfinite(prev) and math.isfinite(cur)):
        raise InvalidInputError(f"non-finite value in trend encoding: {prev!r}, {cur!r}")
    return UP if cur >= prev else DOWN


def trend_encode_window(x: Sequence[float] | np.ndarray) -> TrendPattern:
    """Trend codes of the consecutive transitions in ``x`` (length ``len(x) - 1``)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("trend_encode_window needs a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("non-finite value in trend encoding")
    return tuple(UP if cur >= prev else DOWN for prev, cur in zip(arr[:-1], arr[1:]))


def overlap(a: TrendPattern, b: TrendPattern) -> float:
    """Fraction of positions where two equal-length patterns agree.

    Two empty patterns overlap fully (1.0); this is what makes the lag-1
    model, whose only pattern is empty, count with full membership.
    """
    if len(a) != len(b):
        raise InvalidInputError(f"pattern length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    if n == 0:
        return 1.0
    return sum(1 for u, v in zip(a, b) if u == v) / n


def make_windows(series: TimeSeries | Iterable[float], lag: int) -> list[Window]:
    """All complete (x, y) windows of ``lag`` inputs plus one label value.

    A series of length n yields n - lag windows, in order.
    """
    values = series.values if isinstance(series, TimeSeries) else _frozen_array(list(series))
    if lag < 1:
        raise InvalidInputError(f"lag must be >= 1, got {lag}")
    n = len(values)
    if n < lag + 1:
        raise InsufficientDataError(f"lag {lag} needs at least {lag + 1} values, got {n}")
    xs = np.lib.stride_tricks.sliding_window_view(values, lag)[: n - lag]
    windows = []
    for j in range(n - lag):
        x = xs[j]
        y = float(values[j + lag])
        windows.append(Window(x, y, UP if y >= x[-1] else DOWN))
    return windows
