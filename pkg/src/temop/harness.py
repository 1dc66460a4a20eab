"""Chronological split, walk-forward scoring and report generation."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    InsufficientDataError,
    InsufficientHistoryError,
    InvalidInputError,
    UndefinedMetricError,
)
from .infer import predict_proba
from .metrics import (
    ScoredPoint,
    accuracy,
    confusion,
    f1,
    pr_auc,
    roc_auc,
    sharpe_ratio,
    strategy_returns,
)
from .series import TimeSeries, trend_encode_scalar
from .train import DEFAULT_LAG_CAP, DEFAULT_LAMBDA, DEFAULT_M, TemopModel, train


@dataclass(frozen=True)
class SplitSpec:
    train_len: int = 3000
    val_len: int = 300
    test_len: int = 300
    gap_len: int = 30
    use_validations: bool = True
    context_len: int = DEFAULT_LAG_CAP

    def __post_init__(self):
        for name in ("train_len", "val_len", "test_len", "gap_len", "context_len"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be > 0")

    @property
    def required_len(self) -> int:
        if self.use_validations:
            return self.train_len + 2 * self.val_len + self.test_len + 3 * self.gap_len
        return self.train_len + self.test_len + self.gap_len

    def bounds(self) -> dict[str, tuple[int, int]]:
        """Half-open index ranges of each segment."""
        out = {"train": (0, self.train_len)}
        pos = self.train_len
        if self.use_validations:
            for name in ("val1", "val2"):
                start = pos + self.gap_len
                out[name] = (start, start + self.val_len)
                pos = start + self.val_len
        start = pos + self.gap_len
        out["test"] = (start, start + self.test_len)
        return out


@dataclass(frozen=True)
class Splits:
    train: TimeSeries
    val1: TimeSeries | None
    val2: TimeSeries | None
    test: TimeSeries
    test_context: TimeSeries
    test_start: int


def split(series: TimeSeries, spec: SplitSpec = SplitSpec()) -> Splits:
    """Cut ``train | gap | val1 | gap | val2 | gap | test`` from the front of the series.

    ``test_context`` holds the ``spec.context_len`` observations right before
    the test segment (drawn from the gap and, if needed, earlier data).
    """
    if len(series) < spec.required_len:
        raise InsufficientDataError(
            f"split needs at least {spec.required_len} values, got {len(series)}"
        )
    b = spec.bounds()
    t0, t1 = b["test"]
    val1 = series[slice(*b["val1"])] if "val1" in b else None
    val2 = series[slice(*b["val2"])] if "val2" in b else None
    return Splits(
        train=series[slice(*b["train"])],
        val1=val1,
        val2=val2,
        test=series[t0:t1],
        test_context=series[max(0, t0 - spec.context_len):t0],
        test_start=t0,
    )


class ReadAudit:
    """Records which positions of the walk-forward source each test point reads.

    Positions are relative to the first test value: the pre-test tail sits at
    negative positions, test value k at position k.
    """

    def __init__(self, tail: np.ndarray, test: np.ndarray):
        self._data = np.concatenate([tail, test])
        self._offset = len(tail)
        self.reads: dict[int, set[int]] = {}
        self._current: int | None = None

    def begin(self, k: int) -> None:
        self._current = k
        self.reads[k] = set()

    def read(self, start: int, stop: int) -> np.ndarray:
        self.reads[self._current].update(range(start, stop))
        return self._data[self._offset + start:self._offset + stop]

    def violations(self) -> list[int]:
        return [k for k, idx in self.reads.items() if idx and max(idx) >= k]


class _PlainSource:
    def __init__(self, tail: np.ndarray, test: np.ndarray):
        self._data = np.concatenate([tail, test])
        self._offset = len(tail)

    def begin(self, k: int) -> None:
        pass

    def read(self, start: int, stop: int) -> np.ndarray:
        return self._data[self._offset + start:self._offset + stop]


def walk_forward(
    model: TemopModel,
    pre_test_tail: TimeSeries | Sequence[float],
    test: TimeSeries | Sequence[float],
    audit: ReadAudit | None = None,
) -> list[ScoredPoint]:
    """Score every test point from the ``q`` observations strictly before it.

    Pass an empty ``ReadAudit`` built from the same tail/test to record the
    positions each prediction reads. The model is never refit.
    """
    tail = pre_test_tail.values if isinstance(pre_test_tail, TimeSeries) else np.asarray(pre_test_tail, float)
    vals = test.values if isinstance(test, TimeSeries) else np.asarray(test, float)
    if len(tail) < model.q:
        raise InsufficientHistoryError(model.q, len(tail))
    source = audit if audit is not None else _PlainSource(tail, vals)
    q = model.q
    points = []
    for k in range(len(vals)):
        source.begin(k)
        history = source.read(k - q, k)
        prev = float(history[-1])
        cur = float(vals[k])
        p_up = predict_proba(model, history).p_up
        points.append(ScoredPoint(p_up, trend_encode_scalar(prev, cur), cur / prev - 1.0))
    return points


@dataclass(frozen=True)
class EvalReport:
    per_point: tuple[ScoredPoint, ...]
    acc: float
    f1: float
    roc_auc: float | None
    pr_auc: float | None
    sr: float | None
    q: int
    model_meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_point"] = [asdict(p) for p in self.per_point]
        return d


def _maybe(metric, *args):
    try:
        return metric(*args)
    except UndefinedMetricError:
        return None


def score_points(points: Sequence[ScoredPoint], threshold: float = 0.5, rf: float = 0.0) -> dict:
    """All report metrics for a set of scored points; undefined ones are None."""
    c = confusion(points, threshold)
    return {
        "acc": accuracy(c),
        "f1": f1(c),
        "roc_auc": _maybe(roc_auc, points),
        "pr_auc": _maybe(pr_auc, points),
        "sr": _maybe(sharpe_ratio, strategy_returns(points, threshold), rf),
    }


def evaluate(
    series: TimeSeries,
    spec: SplitSpec = SplitSpec(),
    m: int = DEFAULT_M,
    lam: float = DEFAULT_LAMBDA,
    lag_cap: int = DEFAULT_LAG_CAP,
    threshold: float = 0.5,
    rf: float = 0.0,
    series_id: str = "",
) -> EvalReport:
    parts = split(series, spec)
    model = train(parts.train, m=m, lam=lam, lag_cap=lag_cap)
    context = parts.test_context
    if len(context) < model.q:
        context = series[max(0, parts.test_start - model.q):parts.test_start]
    points = walk_forward(model, context, parts.test)
    meta = {
        "series_id": series_id,
        "m": m,
        "lambda": lam,
        "lag_cap": lag_cap,
        "threshold": threshold,
        "rf": rf,
        "split": asdict(spec),
        "test_start": parts.test_start,
    }
    return EvalReport(tuple(points), q=model.q, model_meta=meta, **score_points(points, threshold, rf))


def write_report_json(report: EvalReport, path: str | os.PathLike) -> None:
    Path(path).write_text(json.dumps(report.to_dict(), indent=1) + "\n", encoding="utf-8")


def write_points_csv(points: Sequence[ScoredPoint], path: str | os.PathLike) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "p_up", "label", "realized_return"])
        for k, p in enumerate(points):
            writer.writerow([k, repr(p.p_up), p.label, repr(p.realized_return)])
