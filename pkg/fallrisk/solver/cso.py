# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
import warnings
from typing import Optional

import numpy as np
from beartype import beartype
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils import check_array

from fallrisk.featurize import FeatureDictionary, FeatureMatrix
from fallrisk.preconditions import check_argument
from fallrisk.types import List, Tuple

from .constraints import ConstraintSet, check_constraints, default_constraints
from .model import (
    FitConfig,
    FitMetadata,
    KKTReport,
    ScoreModel,
    check_fit_config,
    jhfrat_coefficients,
)
from .objective import gradient, hessian, objective, sample_weights

logger = logging.getLogger(__name__)

_ACTIVE_EPSILON = 1e-6
_RIDGE = 1e-10
_NON_UNIQUE_CONDITION = 1e10
_BB_STEP_RANGE = (1e-10, 1e10)


class _IncrementProblem:
    """
    The objective as a function of the non-negative chain increments
    ``theta``, with ``beta = M @ theta``.
    """

    def __init__(
        self,
        X: np.ndarray,
        y: np.ndarray,
        w: np.ndarray,
        M: np.ndarray,
        config: FitConfig,
    ):
        self.X = X
        self.y = y
        self.w = w
        self.M = M
        self.config = config

    def value(self, theta: np.ndarray) -> float:
        return objective(self.X, self.y, self.w, self.M @ theta, self.config)

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        return self.M.T @ gradient(self.X, self.y, self.w, self.M @ theta, self.config)

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        H = hessian(self.X, self.y, self.w, self.M @ theta, self.config)
        return self.M.T @ H @ self.M


def _projected_gradient_norm(theta: np.ndarray, grad: np.ndarray) -> float:
    if theta.size == 0:
        return 0.0
    return float(np.max(np.abs(theta - np.maximum(theta + grad, 0.0))))


def _near_stationary(pg_norm: float, tol: float) -> bool:
    # the relative-improvement stop only applies close to a KKT point
    return pg_norm < tol**0.75


def _free_set(theta: np.ndarray, grad: np.ndarray, epsilon: float) -> np.ndarray:
    return ~((theta <= epsilon) & (grad < 0))


def _newton_direction(
    problem: _IncrementProblem, theta: np.ndarray, grad: np.ndarray, pg_norm: float
) -> np.ndarray:
    free = _free_set(theta, grad, min(_ACTIVE_EPSILON, pg_norm))
    direction = grad.copy()
    if not np.any(free):
        return direction
    curvature = -problem.hessian(theta)[np.ix_(free, free)]
    ridge = _RIDGE * max(1.0, float(np.max(np.abs(np.diag(curvature)))))
    curvature[np.diag_indices_from(curvature)] += ridge
    try:
        direction[free] = cho_solve(cho_factor(curvature), grad[free])
    except LinAlgError:
        direction[free] = np.linalg.lstsq(curvature, grad[free], rcond=None)[0]
    return direction


def _arc_search(
    problem: _IncrementProblem,
    theta: np.ndarray,
    value: float,
    grad: np.ndarray,
    direction: np.ndarray,
    step: float,
    config: FitConfig,
) -> Optional[Tuple[np.ndarray, float]]:
    """
    Armijo backtracking along the projection arc ``max(theta + a d, 0)``.
    Only strict increases are accepted.
    """
    for _ in range(config.max_backtracks):
        candidate = np.maximum(theta + step * direction, 0.0)
        moved = candidate - theta
        if not np.any(moved):
            return None
        candidate_value = problem.value(candidate)
        sufficient = value + config.armijo * float(grad @ moved)
        if candidate_value > value and candidate_value >= sufficient:
            return candidate, candidate_value
        step *= config.backtrack
    return None


def _barzilai_borwein(
    theta: np.ndarray, new_theta: np.ndarray, grad: np.ndarray, new_grad: np.ndarray
) -> float:
    s = new_theta - theta
    curvature = -float(s @ (new_grad - grad))
    low, high = _BB_STEP_RANGE
    if curvature <= 0:
        return high
    return float(np.clip(float(s @ s) / curvature, low, high))


def _solve(
    problem: _IncrementProblem, theta: np.ndarray, config: FitConfig
) -> Tuple[np.ndarray, bool, List[float], float]:
    value = problem.value(theta)
    grad = problem.gradient(theta)
    trace = [value]
    converged = False
    step = 1.0
    pg_norm = _projected_gradient_norm(theta, grad)
    for _ in range(config.max_iter):
        if pg_norm < config.tol:
            converged = True
            break
        accepted: Optional[Tuple[np.ndarray, float]]
        if config.method == "newton":
            direction = _newton_direction(problem, theta, grad, pg_norm)
            accepted = _arc_search(problem, theta, value, grad, direction, 1.0, config)
            if accepted is None:
                accepted = _arc_search(problem, theta, value, grad, grad, 1.0, config)
        else:
            accepted = _arc_search(problem, theta, value, grad, grad, step, config)
        if accepted is None:
            converged = _near_stationary(pg_norm, config.tol)
            logger.info(
                f"Line search stalled after {len(trace) - 1} iterations with "
                f"projected gradient norm {pg_norm:.3g}"
            )
            break
        new_theta, new_value = accepted
        new_grad = problem.gradient(new_theta)
        if config.method == "gradient":
            step = _barzilai_borwein(theta, new_theta, grad, new_grad)
        improvement = (new_value - value) / max(1.0, abs(value))
        theta, value, grad = new_theta, new_value, new_grad
        trace.append(value)
        pg_norm = _projected_gradient_norm(theta, grad)
        if improvement < config.tol and _near_stationary(pg_norm, config.tol):
            converged = True
            break
    else:
        converged = pg_norm < config.tol
    return theta, converged, trace, pg_norm


def _condition_number(
    problem: _IncrementProblem, theta: np.ndarray, grad: np.ndarray
) -> float:
    free = _free_set(theta, grad, _ACTIVE_EPSILON)
    if not np.any(free):
        return 1.0
    curvature = -problem.hessian(theta)[np.ix_(free, free)]
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = float(np.linalg.cond(curvature))
    return condition if np.isfinite(condition) else float("inf")


def kkt_residuals(
    X: np.ndarray,
    y: np.ndarray,
    w: np.ndarray,
    beta: np.ndarray,
    constraints: ConstraintSet = ConstraintSet(),
    config: FitConfig = FitConfig(),
) -> KKTReport:
    """
    First-order optimality residuals of ``beta`` for maximizing
    :func:`~fallrisk.solver.objective` subject to ``beta >= 0`` and the chain
    constraints.

    The constraints are ``D @ beta >= 0`` with ``D`` the difference matrix of
    the chains. Multipliers are recovered as ``max(-g, 0)`` where
    ``g = M^T grad`` is the gradient in increment coordinates.

    Parameters
    ----------
    X : np.ndarray, shape (n, m)
    y : np.ndarray, shape (n,)
    w : np.ndarray, shape (n,)
        Sample weights
    beta : np.ndarray, shape (m,)
        Point to check
    constraints : ConstraintSet
    config : FitConfig

    Returns
    -------
    report : KKTReport
        Infinity norms of the stationarity, primal feasibility and
        complementary slackness residuals.
    """
    beta = np.asarray(beta, dtype=float)
    n_features = beta.shape[0]
    if n_features == 0:
        return KKTReport(0.0, 0.0, 0.0)
    check_constraints(constraints, n_features)
    D = constraints.difference_matrix(n_features)
    M = constraints.increment_matrix(n_features)
    grad_theta = M.T @ gradient(X, y, w, beta, config)
    slack = D @ beta
    multipliers = np.maximum(-grad_theta, 0.0)
    return KKTReport(
        stationarity=float(np.max(np.abs(D.T @ np.maximum(grad_theta, 0.0)))),
        primal=float(max(0.0, -np.min(slack))),
        complementary=float(np.max(np.abs(multipliers * slack))),
    )


@beartype
def fit(
    X: np.ndarray,
    y: np.ndarray,
    constraints: Optional[ConstraintSet] = None,
    config: FitConfig = FitConfig(),
    dictionary: Optional[FeatureDictionary] = None,
    sample_weight: Optional[np.ndarray] = None,
) -> ScoreModel:
    """
    Fits a non-negative additive risk score by maximizing the weighted
    dual-threshold log-likelihood subject to ordering constraints.

    Every chain ``j1 <= ... <= jk`` is rewritten as running sums of
    non-negative increments, which turns the feasible set into the
    non-negative orthant. The concave objective is then maximized there by
    projected Newton (default) or spectral projected gradient ascent, both
    with Armijo backtracking along the projection arc, so every iterate is
    feasible and the objective never decreases.

    Parameters
    ----------
    X : np.ndarray, shape (n, m)
        Feature matrix, finite
    y : np.ndarray, shape (n,)
        Binary labels with both classes present
    constraints : ConstraintSet, optional
        Ordering chains over the columns of ``X``. Defaults to the JHFRAT
        single-select chains when ``dictionary`` is given, none otherwise.
    config : FitConfig
        Objective weighting, thresholds and solver settings
    dictionary : FeatureDictionary, optional
        Column layout; attached to the model and used for the JHFRAT start
    sample_weight : np.ndarray, shape (n,), optional
        Positive weights overriding the class-balancing default

    Returns
    -------
    model : ScoreModel
        Fitted coefficients with the solver report in ``metadata``

    Raises
    ------
    ValueError
        If ``y`` holds a single class, the data are not finite, shapes
        disagree or the constraints are cyclic or not disjoint chains.

    Warns
    -----
    ConvergenceWarning
        If the solver stops before meeting the tolerance; the model is still
        returned with ``metadata.converged`` False.
    """
    check_fit_config(config)
    X = check_array(X, dtype=np.float64, ensure_min_samples=2)
    y = np.asarray(y)
    check_argument(
        y.shape == (X.shape[0],),
        f"y must have shape ({X.shape[0]},), got {y.shape}",
    )
    n_features = X.shape[1]
    if dictionary is not None:
        check_argument(
            dictionary.n_features == n_features,
            f"dictionary has {dictionary.n_features} features, X has {n_features}",
        )
    if constraints is None:
        constraints = (
            ConstraintSet() if dictionary is None else default_constraints(dictionary)
        )
    check_constraints(constraints, n_features)
    w = sample_weights(y)
    if sample_weight is not None:
        w = check_array(sample_weight, dtype=np.float64, ensure_2d=False)
        check_argument(
            w.shape == y.shape and bool(np.all(w > 0)),
            "sample_weight must be positive with one entry per row",
        )

    M = constraints.increment_matrix(n_features)
    D = constraints.difference_matrix(n_features)
    if dictionary is not None and config.init == "jhfrat":
        start = jhfrat_coefficients(dictionary)
    else:
        start = np.zeros(n_features)
    problem = _IncrementProblem(X, y.astype(float), w, M, config)
    theta, converged, trace, pg_norm = _solve(
        problem, np.maximum(D @ start, 0.0), config
    )
    beta = M @ theta
    grad = problem.gradient(theta)
    condition = _condition_number(problem, theta, grad)
    non_unique = condition > _NON_UNIQUE_CONDITION
    if non_unique:
        logger.warning(
            f"Reduced Hessian condition number {condition:.3g}: the optimum may "
            "not be unique"
        )
    iterations = len(trace) - 1
    if not converged:
        msg = (
            f"Score optimization did not converge in {iterations} iterations; the "
            f"projected gradient norm is {pg_norm:.3g} and tol is {config.tol}. "
            "Consider increasing `max_iter` or using method='newton'."
        )
        warnings.warn(msg, ConvergenceWarning)
    metadata = FitMetadata(
        lambda_=float(config.lambda_),
        method=config.method,
        iterations=iterations,
        objective=trace[-1],
        converged=converged,
        kkt=kkt_residuals(X, y, w, beta, constraints, config),
        projected_gradient=pg_norm,
        non_unique=non_unique,
        condition_number=condition,
        trace=tuple(trace),
    )
    logger.info(
        f"Fitted {n_features} coefficients in {iterations} iterations "
        f"(objective {metadata.objective:.6f}, converged={converged})"
    )
    return ScoreModel(
        beta=beta,
        dictionary=dictionary,
        thresholds=(float(config.thresholds[0]), float(config.thresholds[1])),
        constraints=constraints,
        metadata=metadata,
    )


@beartype
def fit_matrix(
    matrix: FeatureMatrix,
    config: FitConfig = FitConfig(),
    constraints: Optional[ConstraintSet] = None,
) -> ScoreModel:
    """
    :func:`fit` on a labeled :class:`~fallrisk.featurize.FeatureMatrix`, with the
    default JHFRAT chains unless ``constraints`` are given.
    """
    check_argument(matrix.labeled, "every row of the matrix needs a binary label")
    return fit(
        matrix.X,
        matrix.y,
        constraints=constraints,
        config=config,
        dictionary=matrix.dictionary,
    )
