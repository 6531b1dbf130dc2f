# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.stats import rankdata, spearmanr
from sklearn.metrics import average_precision_score, precision_recall_curve, roc_curve

from fallrisk.jhfrat import HIGH_THRESHOLD, LOW_THRESHOLD
from fallrisk.preconditions import check_argument
from fallrisk.types import List, Scalar, Tuple

ArrayLike = Union[np.ndarray, Sequence[float]]


class ConfusionRates(NamedTuple):
    threshold: float
    inclusive: bool
    tpr: float
    fpr: float


def _check_binary(scores: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    scores = np.asarray(scores, dtype=float)
    y = np.asarray(y)
    check_argument(
        scores.ndim == 1 and scores.shape == y.shape,
        f"scores and y must be 1-dimensional of equal length, got {scores.shape} "
        f"and {y.shape}",
    )
    check_argument(bool(np.all(np.isin(y, (0, 1)))), "y must only contain 0 and 1")
    check_argument(0 < int(np.sum(y)) < y.shape[0], "y must contain both classes")
    check_argument(bool(np.all(np.isfinite(scores))), "scores must be finite")
    return scores, y.astype(int)


def auc_roc(scores: ArrayLike, y: ArrayLike) -> float:
    """
    Area under the ROC curve as the Mann-Whitney statistic with midranks, i.e.
    ``P(score+ > score-) + P(score+ == score-) / 2``.

    >>> auc_roc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1])
    0.75
    >>> auc_roc([1, 1, 1, 1], [0, 1, 0, 1])
    0.5
    """
    scores, y = _check_binary(scores, y)
    ranks = rankdata(scores)
    n_pos = int(np.sum(y))
    n_neg = y.shape[0] - n_pos
    u_statistic = float(np.sum(ranks[y == 1])) - n_pos * (n_pos + 1) / 2.0
    return u_statistic / (n_pos * n_neg)


def auc_pr(scores: ArrayLike, y: ArrayLike) -> float:
    """
    Area under the precision-recall curve as average precision, the step-wise
    integral over the distinct score thresholds.
    """
    scores, y = _check_binary(scores, y)
    return float(average_precision_score(y, scores))


def threshold_confusion(
    scores: ArrayLike, y: ArrayLike, threshold: Scalar, inclusive: bool = False
) -> ConfusionRates:
    """
    True and false positive rates when encounters scoring above ``threshold``
    (at or above it when ``inclusive``) are called positive.

    >>> threshold_confusion([20, 20, 0], [1, 1, 0], 13)
    ConfusionRates(threshold=13.0, inclusive=False, tpr=1.0, fpr=0.0)
    """
    scores, y = _check_binary(scores, y)
    predicted = scores >= threshold if inclusive else scores > threshold
    positives = y == 1
    return ConfusionRates(
        threshold=float(threshold),
        inclusive=inclusive,
        tpr=float(np.mean(predicted[positives])),
        fpr=float(np.mean(predicted[~positives])),
    )


def category_confusion(
    scores: ArrayLike,
    y: ArrayLike,
    thresholds: Tuple[float, float] = (LOW_THRESHOLD, HIGH_THRESHOLD),
) -> List[ConfusionRates]:
    """
    Confusion rates at both category thresholds: non-Low (``>= low``) and
    High (``> high``).
    """
    low, high = thresholds
    return [
        threshold_confusion(scores, y, low, inclusive=True),
        threshold_confusion(scores, y, high, inclusive=False),
    ]


def roc_points(scores: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    scores, y = _check_binary(scores, y)
    fpr, tpr, _ = roc_curve(y, scores)
    return fpr, tpr


def pr_points(scores: ArrayLike, y: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    scores, y = _check_binary(scores, y)
    precision, recall, _ = precision_recall_curve(y, scores)
    return recall, precision


def spearman(x: ArrayLike, y: ArrayLike) -> float:
    """
    Spearman rank correlation with midranks for ties. Undefined, and returned
    as NaN, when either input is constant.

    >>> round(spearman([1, 2, 3], [3, 2, 1]), 12)
    -1.0
    >>> spearman([1, 1, 1], [1, 2, 3])
    nan
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    check_argument(
        x.ndim == 1 and x.shape == y.shape and x.shape[0] >= 2,
        "x and y must be 1-dimensional of equal length >= 2",
    )
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return float("nan")
    return float(spearmanr(x, y).statistic)
