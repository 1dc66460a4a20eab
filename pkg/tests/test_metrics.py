import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from temop.errors import UndefinedMetricError
from temop.metrics import (
    ConfusionCounts,
    ScoredPoint,
    accuracy,
    confusion,
    f1,
    pr_auc,
    roc_auc,
    sharpe_ratio,
    strategy_returns,
)


def pts(scores, labels, returns=None):
    returns = returns or [0.0] * len(scores)
    return [ScoredPoint(s, l, r) for s, l, r in zip(scores, labels, returns)]


def pair_count_auc(points):
    pos = [p.p_up for p in points if p.label == 1]
    neg = [p.p_up for p in points if p.label != 1]
    wins = sum(1.0 if a > b else 0.5 if a == b else 0.0 for a in pos for b in neg)
    return wins / (len(pos) * len(neg))


@pytest.mark.parametrize(
    "c, expected",
    [
        (ConfusionCounts(tp=5, tn=5), 1.0),
        (ConfusionCounts(tp=3, tn=2, fp=2, fn=3), 0.5),
        (ConfusionCounts(tp=30, tn=26, fp=20, fn=24), (30 + 26) / 100),
    ],
)
def test_accuracy(c, expected):
    assert accuracy(c) == expected


def test_accuracy_empty():
    with pytest.raises(UndefinedMetricError):
        accuracy(ConfusionCounts())


@pytest.mark.parametrize(
    "c, expected",
    [
        (ConfusionCounts(tp=10, fp=0, fn=0, tn=5), 1.0),
        (ConfusionCounts(tp=0, fp=3, fn=4, tn=5), 0.0),
        (ConfusionCounts(tp=6, fp=2, fn=4, tn=3), 2 / 3),
    ],
)
def test_f1(c, expected):
    assert f1(c) == pytest.approx(expected, abs=1e-15)


def test_confusion_counts_threshold_tie_is_up():
    c = confusion(pts([0.5, 0.2, 0.9, 0.1], [1, 1, -1, -1]))
    assert c == ConfusionCounts(tp=1, fp=1, tn=1, fn=1)


def test_roc_auc_examples():
    assert roc_auc(pts([0.9, 0.8, 0.2, 0.1], [1, 1, -1, -1])) == 1.0
    assert roc_auc(pts([0.4] * 6, [1, -1, 1, -1, 1, 1])) == 0.5
    assert roc_auc(pts([0.9, 0.8, 0.7, 0.6], [1, -1, 1, -1])) == 0.75


def test_roc_auc_single_class():
    with pytest.raises(UndefinedMetricError):
        roc_auc(pts([0.1, 0.2], [1, 1]))


def test_roc_auc_labels_as_scores():
    labels = [1, -1, -1, 1, 1, -1, 1]
    assert roc_auc(pts([1.0 if l == 1 else 0.0 for l in labels], labels)) == 1.0


def test_roc_auc_matches_pair_counting_on_random_sets():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(2, 50)
        scores = [rng.choice([0.1, 0.2, 0.5, rng.random()]) for _ in range(n)]
        labels = [rng.choice([1, -1]) for _ in range(n)]
        labels[0], labels[1] = 1, -1
        points = pts(scores, labels)
        assert roc_auc(points) == pair_count_auc(points)


@settings(max_examples=60)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=40, unique=True), st.randoms())
def test_roc_auc_complement(scores, rnd):
    labels = [rnd.choice([1, -1]) for _ in scores]
    labels[0], labels[1] = 1, -1
    a = roc_auc(pts(scores, labels))
    b = roc_auc(pts([-s for s in scores], labels))
    assert a + b == pytest.approx(1.0, abs=1e-12)


def test_pr_auc_examples():
    assert pr_auc(pts([0.9, 0.8, 0.2, 0.1], [1, 1, -1, -1])) == 1.0
    assert pr_auc(pts([0.3] * 5, [1, -1, -1, 1, -1])) == pytest.approx(2 / 5, abs=1e-15)
    # sweep: (R, P) = (1/2, 1), (1/2, 1/2), (1, 2/3), (1, 1/2) -> 1/2 * 1 + 1/2 * 2/3
    assert pr_auc(pts([0.9, 0.8, 0.7, 0.6], [1, -1, 1, -1])) == pytest.approx(5 / 6, abs=1e-15)


def test_pr_auc_no_positives():
    with pytest.raises(UndefinedMetricError):
        pr_auc(pts([0.1, 0.2], [-1, -1]))


def test_strategy_returns():
    returns = [0.01, -0.02, 0.03, -0.01]
    labels = [1, -1, 1, -1]
    assert list(strategy_returns(pts([0.0] * 4, labels, returns))) == [0.0] * 4
    assert list(strategy_returns(pts([1.0] * 4, labels, returns))) == returns
    probs = [0.6, 0.4, 0.5, 0.49]
    got = strategy_returns(pts(probs, labels, returns))
    expected = [r if p >= 0.5 else 0.0 for p, r in zip(probs, returns)]
    assert list(got) == expected
    short = strategy_returns(pts(probs, labels, returns), long_short=True)
    assert list(short) == [0.01, 0.02, 0.03, 0.01]


def test_sharpe_ratio():
    assert sharpe_ratio([0.01, -0.01] * 5) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(UndefinedMetricError):
        sharpe_ratio([0.02, 0.02, 0.02])
    with pytest.raises(UndefinedMetricError):
        sharpe_ratio([0.02])
    # mean 0.01, sample variance 0.0014 / 3
    assert sharpe_ratio([0.01, 0.03, -0.02, 0.02]) == pytest.approx(math.sqrt(3 / 14), abs=1e-12)


@given(st.lists(st.floats(-0.1, 0.1), min_size=3, max_size=30), st.floats(-0.01, 0.01))
def test_sharpe_shift_invariance(returns, rf):
    if np.std(returns) < 1e-6:
        return
    shifted = [r + rf for r in returns]
    assert sharpe_ratio(shifted, rf) == pytest.approx(sharpe_ratio(returns), rel=1e-6, abs=1e-9)


def test_metrics_permutation_invariant():
    rng = random.Random(3)
    points = pts([rng.random() for _ in range(30)], [rng.choice([1, -1]) for _ in range(30)])
    shuffled = points[:]
    rng.shuffle(shuffled)
    assert accuracy(confusion(points)) == accuracy(confusion(shuffled))
    assert f1(confusion(points)) == f1(confusion(shuffled))
    assert roc_auc(points) == roc_auc(shuffled)
