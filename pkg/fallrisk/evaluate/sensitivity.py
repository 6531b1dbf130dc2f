# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
import warnings
from typing import NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from beartype import beartype
from joblib import Parallel, delayed
from sklearn.exceptions import ConvergenceWarning

from fallrisk.cohort import Encounter, LabelingPolicy, build_cohort
from fallrisk.featurize import FeatureMatrix, build_matrix
from fallrisk.jhfrat import JHFRAT_ITEM_NAMES
from fallrisk.preconditions import check_argument
from fallrisk.solver import FitConfig, check_fit_config, fit_matrix
from fallrisk.types import Dict, Int, List, Scalar, Tuple

from .metrics import auc_pr, auc_roc
from .stability import coefficient_shares, stability_stats

logger = logging.getLogger(__name__)

SWEEP_THRESHOLDS: Tuple[int, ...] = (4, 5, 6, 7, 8)
SWEEP_LAMBDAS: Tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)


class SweepPoint(NamedTuple):
    threshold: int
    n_low: int
    n_high: int
    n_indeterminate: int
    n_promoted: int
    beta: Optional[pd.Series]
    """
    Fitted coefficients, None when the cohort could not be fitted.
    """
    converged: bool


class SweepResult(NamedTuple):
    """
    Attributes
    ----------
    points : Tuple[SweepPoint, ...]
        One per labeling threshold, in sweep order
    counts : pd.DataFrame
        Rule label counts and promotions per threshold
    coefficients : pd.DataFrame
        Threshold by feature coefficients of the fitted cohorts
    stability : pd.DataFrame
        Per JHFRAT item share-of-sum spread across the fitted cohorts
    """

    points: Tuple[SweepPoint, ...]
    counts: pd.DataFrame
    coefficients: pd.DataFrame
    stability: pd.DataFrame


def _sweep_point(
    encounters: Sequence[Encounter],
    threshold: int,
    policy: LabelingPolicy,
    config: FitConfig,
    augmented: bool,
) -> SweepPoint:
    cohort = build_cohort(encounters, policy._replace(high_min_per_window=threshold))
    counts = cohort.label_counts
    beta = None
    converged = False
    y = np.array([record.y for record in cohort.binary()])
    if np.all(y == y[0]):
        logger.warning(
            f"Threshold {threshold}: cohort holds a single class; not fitted"
        )
    else:
        matrix = build_matrix(cohort, augmented=augmented)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            model = fit_matrix(matrix, config)
        beta = pd.Series(model.beta, index=list(model.feature_names))
        converged = bool(model.metadata.converged)
    return SweepPoint(
        threshold=threshold,
        n_low=counts["Low"],
        n_high=counts["High"],
        n_indeterminate=counts["Indeterminate"],
        n_promoted=cohort.n_promoted,
        beta=beta,
        converged=converged,
    )


@beartype
def sensitivity_sweep(
    encounters: Sequence[Encounter],
    thresholds: Sequence[Int] = SWEEP_THRESHOLDS,
    config: FitConfig = FitConfig(),
    policy: LabelingPolicy = LabelingPolicy(),
    augmented: bool = True,
    workers: int = 1,
) -> SweepResult:
    """
    Relabels the encounters with every High threshold (minimum targeted
    interventions per window), rebuilds the feature matrix and refits.

    Parameters
    ----------
    encounters : Sequence[Encounter]
        Raw encounters
    thresholds : Sequence[int] (default=(4, 5, 6, 7, 8))
        Values of ``high_min_per_window`` to sweep
    config : FitConfig
        Solver settings
    policy : LabelingPolicy
        Remaining labeling settings
    augmented : bool (default=True)
        Fit on the augmented feature set
    workers : int (default=1)
        Thresholds processed in parallel. See :class:`joblib.Parallel`.

    Returns
    -------
    result : SweepResult
        ``n_high`` counts rule-labelled High encounters; matches promoted
        through fall encounters are reported in ``n_promoted``.

    Raises
    ------
    EmptyCohortError
        If a threshold leaves no binary-labeled encounter.
    """
    check_argument(len(thresholds) > 0, "need at least one threshold")
    check_fit_config(config)
    points = tuple(
        Parallel(n_jobs=workers)(
            delayed(_sweep_point)(encounters, int(t), policy, config, augmented)
            for t in thresholds
        )
    )
    failed = [p.threshold for p in points if p.beta is not None and not p.converged]
    if failed:
        msg = f"Score optimization did not converge for thresholds {failed}"
        logger.warning(msg)
        warnings.warn(msg, ConvergenceWarning)

    counts = pd.DataFrame(
        [
            {
                "threshold": p.threshold,
                "low": p.n_low,
                "high": p.n_high,
                "indeterminate": p.n_indeterminate,
                "promoted": p.n_promoted,
            }
            for p in points
        ]
    ).set_index("threshold")
    fitted = [p for p in points if p.beta is not None]
    coefficients = pd.DataFrame(
        [p.beta for p in fitted],  # type: ignore[misc]
        index=pd.Index([p.threshold for p in fitted], name="threshold"),
    )
    stability = (
        stability_stats(coefficients, subset=JHFRAT_ITEM_NAMES)
        if fitted
        else pd.DataFrame(columns=["min", "max", "range", "sd"])
    )
    return SweepResult(points, counts, coefficients, stability)


def _lambda_point(
    matrix: FeatureMatrix, lambda_: float, config: FitConfig
) -> Dict[str, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        model = fit_matrix(matrix, config._replace(lambda_=lambda_))
    scores = matrix.X @ model.beta
    row = {
        "lambda": lambda_,
        "auc_roc": auc_roc(scores, matrix.y),
        "auc_pr": auc_pr(scores, matrix.y),
        "objective": model.metadata.objective,
        "converged": float(model.metadata.converged),
    }
    row.update(model.coefficients())
    return row


@beartype
def lambda_sweep(
    matrix: FeatureMatrix,
    lambdas: Sequence[Scalar] = SWEEP_LAMBDAS,
    config: FitConfig = FitConfig(),
    workers: int = 1,
) -> pd.DataFrame:
    """
    Refits the score for every weighting ``lambda`` between the low and high
    threshold log-likelihoods.

    Returns
    -------
    sweep : pd.DataFrame
        One row per ``lambda`` with the in-sample AUCs, the final objective,
        convergence (1.0 or 0.0) and every coefficient.
    """
    check_argument(len(lambdas) > 0, "need at least one lambda")
    for value in lambdas:
        check_argument(0 <= value <= 1, f"lambda must be in [0, 1], got {value}")
    check_argument(matrix.labeled, "every row of the matrix needs a binary label")
    rows: List[Dict[str, float]] = Parallel(n_jobs=workers)(
        delayed(_lambda_point)(matrix, float(value), config) for value in lambdas
    )
    if not all(row["converged"] for row in rows):
        msg = "Score optimization did not converge for every lambda"
        logger.warning(msg)
        warnings.warn(msg, ConvergenceWarning)
    return pd.DataFrame(rows).set_index("lambda")


def share_ranges(result: SweepResult) -> pd.DataFrame:
    """
    Per-threshold JHFRAT coefficient shares, one column per threshold.
    """
    return pd.DataFrame(
        {
            p.threshold: coefficient_shares(
                p.beta.to_numpy(), list(p.beta.index), JHFRAT_ITEM_NAMES
            )
            for p in result.points
            if p.beta is not None
        }
    )
