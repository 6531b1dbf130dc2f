# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

"""
Weighted dual-threshold logistic log-likelihood and its derivatives.

For a threshold ``T`` the log-likelihood of scores ``X @ beta`` is

    L_T = sum_i w_i [y_i (x_i beta - T) - log(1 + exp(x_i beta - T))]

and the optimized objective is ``lambda * L_low + (1 - lambda) * L_high``.
"""

import numpy as np
from scipy.special import expit

from fallrisk.preconditions import check_argument
from fallrisk.types import Scalar, Tuple

from .model import FitConfig


def _check_shapes(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, beta: np.ndarray
) -> None:
    check_argument(X.ndim == 2, f"X must be 2-dimensional, got shape {X.shape}")
    n, m = X.shape
    check_argument(y.shape == (n,), f"y must have shape ({n},), got {y.shape}")
    check_argument(w.shape == (n,), f"w must have shape ({n},), got {w.shape}")
    check_argument(
        beta.shape == (m,), f"beta must have shape ({m},), got {beta.shape}"
    )


def sample_weights(y: np.ndarray) -> np.ndarray:
    """
    Class-balancing weights: ``1 / n1`` for positives and ``1 / n0`` for
    negatives, so each class sums to one.

    >>> sample_weights(np.array([1, 0, 0, 0])).tolist()
    [1.0, 0.3333333333333333, 0.3333333333333333, 0.3333333333333333]

    Raises
    ------
    ValueError
        If ``y`` is not binary or holds a single class.
    """
    y = np.asarray(y)
    check_argument(y.ndim == 1, "y must be 1-dimensional")
    check_argument(bool(np.all(np.isin(y, (0, 1)))), "y must only contain 0 and 1")
    n1 = int(np.sum(y == 1))
    n0 = y.shape[0] - n1
    check_argument(
        n1 > 0 and n0 > 0,
        f"y must contain both classes, got {n1} positives and {n0} negatives",
    )
    return np.where(y == 1, 1.0 / n1, 1.0 / n0)


def log_likelihood(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, beta: np.ndarray, T: Scalar
) -> float:
    """
    Weighted logistic log-likelihood of the scores ``X @ beta`` shifted by the
    threshold ``T``. ``log(1 + exp(z))`` is evaluated with ``np.logaddexp`` so
    large scores do not overflow.

    >>> X = np.zeros((1, 1))
    >>> round(log_likelihood(X, np.array([1]), np.array([1.0]), np.zeros(1), 6), 6)
    -6.002476
    """
    X, y, w, beta = (np.asarray(a, dtype=float) for a in (X, y, w, beta))
    _check_shapes(X, y, w, beta)
    z = X @ beta - T
    return float(np.sum(w * (y * z - np.logaddexp(0.0, z))))


def _threshold_weights(config: FitConfig) -> Tuple[Tuple[float, float], ...]:
    low, high = config.thresholds
    return ((config.lambda_, low), (1.0 - config.lambda_, high))


def objective(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    beta: np.ndarray,
    config: FitConfig = FitConfig(),
) -> float:
    """
    ``lambda * L_low + (1 - lambda) * L_high``.
    """
    return float(
        sum(
            weight * log_likelihood(X, y, w, beta, T)
            for weight, T in _threshold_weights(config)
            if weight != 0
        )
    )


def gradient(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    beta: np.ndarray,
    config: FitConfig = FitConfig(),
) -> np.ndarray:
    """
    Gradient of :func:`objective` with respect to ``beta``,
    ``sum_T weight_T X^T (w * (y - sigmoid(X beta - T)))``.
    """
    X, y, w, beta = (np.asarray(a, dtype=float) for a in (X, y, w, beta))
    _check_shapes(X, y, w, beta)
    scores = X @ beta
    residual = np.zeros_like(scores)
    for weight, T in _threshold_weights(config):
        if weight != 0:
            residual += weight * w * (y - expit(scores - T))
    return X.T @ residual


def hessian(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    beta: np.ndarray,
    config: FitConfig = FitConfig(),
) -> np.ndarray:
    """
    Hessian of :func:`objective`; negative semi-definite.
    """
    X, y, w, beta = (np.asarray(a, dtype=float) for a in (X, y, w, beta))
    _check_shapes(X, y, w, beta)
    scores = X @ beta
    curvature = np.zeros_like(scores)
    for weight, T in _threshold_weights(config):
        if weight != 0:
            p = expit(scores - T)
            curvature += weight * w * p * (1.0 - p)
    return -(X.T * curvature) @ X
