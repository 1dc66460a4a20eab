"""Classification and strategy metrics for scored test points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import InvalidInputError, UndefinedMetricError
from .infer import classify
from .series import UP


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class ScoredPoint:
    """A forecast for one step together with what actually happened."""

    p_up: float
    label: int
    realized_return: float


def confusion(points: Iterable[ScoredPoint], threshold: float = 0.5) -> ConfusionCounts:
    tp = fp = tn = fn = 0
    for p in points:
        pred = classify(p.p_up, threshold)
        if pred == UP:
            if p.label == UP:
                tp += 1
            else:
                fp += 1
        elif p.label == UP:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp, fp, tn, fn)


def accuracy(c: ConfusionCounts) -> float:
    if c.total == 0:
        raise UndefinedMetricError("accuracy of an empty set")
    return (c.tp + c.tn) / c.total


def f1(c: ConfusionCounts) -> float:
    """Harmonic mean of precision and recall; 0 when there are no true positives."""
    if c.tp == 0:
        return 0.0
    precision = c.tp / (c.tp + c.fp)
    recall = c.tp / (c.tp + c.fn)
    return 2 * precision * recall / (precision + recall)


def _scores_labels(points: Sequence[ScoredPoint]) -> tuple[np.ndarray, np.ndarray]:
    scores = np.array([p.p_up for p in points], dtype=float)
    pos = np.array([p.label == UP for p in points], dtype=bool)
    return scores, pos


def roc_auc(points: Sequence[ScoredPoint]) -> float:
    """Probability that a random positive outranks a random negative (ties count half)."""
    scores, pos = _scores_labels(points)
    n_pos = int(pos.sum())
    n_neg = len(pos) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("ROC AUC needs both positive and negative labels")
    ranks = rankdata(scores, method="average")
    u_stat = ranks[pos].sum() - n_pos * (n_pos + 1) / 2
    return float(u_stat / (n_pos * n_neg))


def pr_auc(points: Sequence[ScoredPoint]) -> float:
    """Step-wise area under the precision-recall curve.

    Thresholds sweep the distinct scores from high to low; each recall
    increment is weighted by the precision at that threshold.
    """
    scores, pos = _scores_labels(points)
    n_pos = int(pos.sum())
    if n_pos == 0:
        raise UndefinedMetricError("PR AUC needs at least one positive label")
    order = np.argsort(-scores, kind="stable")
    s, y = scores[order], pos[order]
    tp = np.cumsum(y)
    seen = np.arange(1, len(y) + 1)
    # last index of each tied-score block
    ends = np.r_[np.nonzero(np.diff(s))[0], len(s) - 1]
    recall = tp[ends] / n_pos
    precision = tp[ends] / seen[ends]
    d_recall = np.diff(np.r_[0.0, recall])
    return float(np.sum(d_recall * precision))


def strategy_returns(
    points: Sequence[ScoredPoint],
    threshold: float = 0.5,
    long_short: bool = False,
) -> np.ndarray:
    """Per-step returns of trading the forecasts.

    Long the asset when an up-move is predicted; otherwise flat, or short
    when ``long_short`` is set.
    """
    out = np.empty(len(points))
    for k, p in enumerate(points):
        if classify(p.p_up, threshold) == UP:
            out[k] = p.realized_return
        else:
            out[k] = -p.realized_return if long_short else 0.0
    return out


def sharpe_ratio(returns: Sequence[float] | np.ndarray, rf: float = 0.0) -> float:
    """Per-step (non-annualised) Sharpe ratio with sample std."""
    r = np.asarray(returns, dtype=float)
    if r.ndim != 1 or len(r) < 2:
        raise UndefinedMetricError("Sharpe ratio needs at least two returns")
    if not np.all(np.isfinite(r)):
        raise InvalidInputError("returns must be finite")
    sd = r.std(ddof=1)
    if np.all(r == r[0]) or sd == 0.0:
        raise UndefinedMetricError("Sharpe ratio undefined for zero-variance returns")
    return float((r.mean() - rf) / sd)
