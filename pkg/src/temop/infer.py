"""Scoring a history window against a trained model."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientHistoryError, InvalidInputError
from .series import DOWN, UP, TrendPattern, overlap, trend_encode_window
from .train import ClassStats, LagModel, SubsetModel, TemopModel


class EmptyClassError(InvalidInputError):
    """Raised when a distance is requested to a class with no samples."""


@dataclass(frozen=True)
class SubsetScores:
    u: float
    plus_trend: float
    plus_dist: float
    minus_trend: float
    minus_dist: float


@dataclass(frozen=True)
class LagScores:
    lag: int
    plus_trend: float
    plus_dist: float
    minus_trend: float
    minus_dist: float

    @property
    def plus(self) -> float:
        return self.plus_trend + self.plus_dist

    @property
    def minus(self) -> float:
        return self.minus_trend + self.minus_dist


@dataclass(frozen=True)
class ScoreBreakdown:
    per_lag: tuple[LagScores, ...]
    total_plus: float
    total_minus: float
    p_up: float

    @property
    def p_down(self) -> float:
        return 1.0 - self.p_up


def bayes_trend_score(n_plus: int, n_minus: int) -> float:
    """Posterior mean of the up-probability under a Beta(1, 1) prior."""
    if n_plus < 0 or n_minus < 0:
        raise InvalidInputError("class counts must be non-negative")
    return (n_plus + 1) / (n_plus + n_minus + 2)


def mahalanobis(x: Sequence[float] | np.ndarray, stats: ClassStats) -> float:
    if stats.empty:
        raise EmptyClassError("class has no samples")
    x = np.asarray(x, dtype=float)
    if x.shape != (stats.dim,):
        raise InvalidInputError(f"expected a vector of length {stats.dim}, got shape {x.shape}")
    z = (x - stats.mean) / stats.std
    d2 = float(z @ stats.inv_cov @ z)
    # inv_cov is SPD; guard only against rounding just below zero
    return math.sqrt(max(d2, 0.0))


def dtp(u: float) -> float:
    """Map a distance in [0, inf) to a similarity in (0, 1]: 2 / (1 + e^u)."""
    if u < 0:
        raise InvalidInputError(f"distance must be >= 0, got {u}")
    # 2 e^-u / (1 + e^-u) avoids overflow of e^u for large distances
    e = math.exp(-u)
    return 2.0 * e / (1.0 + e)


def _dist_score(x0: np.ndarray, stats: ClassStats) -> float:
    return 0.0 if stats.empty else dtp(mahalanobis(x0, stats))


def subset_scores(x0: np.ndarray, pattern0: TrendPattern, subset: SubsetModel) -> SubsetScores:
    n_plus, n_minus = subset.plus.count, subset.minus.count
    return SubsetScores(
        u=overlap(pattern0, subset.pattern),
        plus_trend=bayes_trend_score(n_plus, n_minus),
        plus_dist=_dist_score(x0, subset.plus),
        minus_trend=bayes_trend_score(n_minus, n_plus),
        minus_dist=_dist_score(x0, subset.minus),
    )


def lag_scores(lag_model: LagModel, recent: Sequence[float] | np.ndarray) -> LagScores:
    """Membership-weighted trend and distance scores summed over every subset."""
    x0 = np.asarray(recent, dtype=float)
    if x0.shape != (lag_model.lag,):
        raise InvalidInputError(
            f"lag {lag_model.lag} needs exactly {lag_model.lag} values, got shape {x0.shape}"
        )
    pattern0 = trend_encode_window(x0)
    pt = pd = mt = md = 0.0
    for subset in lag_model.subsets:
        s = subset_scores(x0, pattern0, subset)
        if s.u == 0.0:
            continue
        pt += s.u * s.plus_trend
        pd += s.u * s.plus_dist
        mt += s.u * s.minus_trend
        md += s.u * s.minus_dist
    return LagScores(lag_model.lag, pt, pd, mt, md)


def softmax2(a: float, b: float) -> float:
    """exp(a) / (exp(a) + exp(b)) without overflow."""
    top = max(a, b)
    ea, eb = math.exp(a - top), math.exp(b - top)
    return ea / (ea + eb)


def predict_proba(model: TemopModel, recent: Sequence[float] | np.ndarray) -> ScoreBreakdown:
    """Probability that the next value is >= the last value of ``recent``.

    Only the last ``model.q`` values of ``recent`` are used.
    """
    hist = np.asarray(recent, dtype=float)
    if hist.ndim != 1:
        raise InvalidInputError("history must be a 1-d vector")
    if len(hist) < model.q:
        raise InsufficientHistoryError(model.q, len(hist))
    if not np.all(np.isfinite(hist[-model.q:])):
        raise InvalidInputError("history must be finite")

    per_lag = tuple(lag_scores(lm, hist[len(hist) - lm.lag:]) for lm in model.lag_models)
    total_plus = sum(ls.plus for ls in per_lag)
    total_minus = sum(ls.minus for ls in per_lag)
    return ScoreBreakdown(per_lag, total_plus, total_minus, softmax2(total_plus, total_minus))


def classify(p_up: float, threshold: float = 0.5) -> int:
    if not 0.0 <= threshold <= 1.0:
        raise InvalidInputError(f"threshold must lie in [0, 1], got {threshold}")
    if not 0.0 <= p_up <= 1.0:
        raise InvalidInputError(f"p_up must lie in [0, 1], got {p_up}")
    return UP if p_up >= threshold else DOWN
