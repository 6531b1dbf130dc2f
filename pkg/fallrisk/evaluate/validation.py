# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
import warnings
from typing import Any, NamedTuple, Sequence

import numpy as np
import pandas as pd
from beartype import beartype
from joblib import Parallel, delayed
from sklearn.exceptions import ConvergenceWarning
from sklearn.model_selection import StratifiedKFold

from fallrisk.featurize import FeatureMatrix, jhfrat_only
from fallrisk.preconditions import check_argument
from fallrisk.solver import FitConfig, ScoreModel, baseline_model, fit_matrix
from fallrisk.types import Dict, Int, List

from .metrics import auc_pr, auc_roc, category_confusion

logger = logging.getLogger(__name__)

BASELINE = "jhfrat"
OPTIMIZED = "optimized"
AUGMENTED = "augmented"


class CrossValidationResult(NamedTuple):
    """
    Attributes
    ----------
    folds : np.ndarray, shape (n,)
        Test fold of every row
    fold_metrics : pd.DataFrame
        One row per model and fold: AUC-ROC, AUC-PR, confusion rates at both
        thresholds and whether the fit converged
    oof_scores : pd.DataFrame
        Out-of-fold score of every row under every model, with id, y, fall
        and fold
    coefficients : Dict[str, pd.DataFrame]
        Fold by feature coefficient table of every fitted model
    summary : pd.DataFrame
        Per model mean and standard deviation of the fold AUCs and the AUCs of
        the pooled out-of-fold scores
    final_models : Dict[str, ScoreModel]
        Every model refitted on all rows
    """

    folds: np.ndarray
    fold_metrics: pd.DataFrame
    oof_scores: pd.DataFrame
    coefficients: Dict[str, pd.DataFrame]
    summary: pd.DataFrame
    final_models: Dict[str, ScoreModel]

    @property
    def models(self) -> List[str]:
        return list(self.final_models)


@beartype
def stratified_kfold(
    ids: Sequence[str], y: np.ndarray, k: Int = 5, seed: Int = 0
) -> np.ndarray:
    """
    Assigns every row to one of ``k`` test folds, keeping the class ratio of
    each fold as close to the overall ratio as the counts allow.

    Parameters
    ----------
    ids : Sequence[str]
        Row identifiers, aligned with ``y``
    y : np.ndarray
        Binary labels
    k : int (default=5)
        Number of folds; each class needs at least ``k`` rows
    seed : int (default=0)
        Seed of the shuffle

    Returns
    -------
    folds : np.ndarray of int, shape (n,)

    Examples
    --------
    >>> y = np.array([1, 0] * 5)
    >>> folds = stratified_kfold([str(i) for i in range(10)], y, k=5, seed=0)
    >>> np.bincount(folds[y == 1]).tolist()
    [1, 1, 1, 1, 1]
    """
    y = np.asarray(y)
    check_argument(len(ids) == y.shape[0], "ids and y must have the same length")
    check_argument(k >= 2, f"k must be at least 2, got {k}")
    smallest = min(int(np.sum(y == 1)), int(np.sum(y == 0)))
    check_argument(
        smallest >= k, f"each class needs at least {k} rows, the smaller has {smallest}"
    )
    folds = np.empty(y.shape[0], dtype=int)
    splitter = StratifiedKFold(n_splits=int(k), shuffle=True, random_state=int(seed))
    for fold, (_, test) in enumerate(splitter.split(np.zeros((y.shape[0], 1)), y)):
        folds[test] = fold
    return folds


def _model_inputs(matrix: FeatureMatrix) -> Dict[str, FeatureMatrix]:
    inputs = {OPTIMIZED: jhfrat_only(matrix)}
    if matrix.dictionary.augmented:
        inputs[AUGMENTED] = matrix
    return inputs


def _fit_quietly(matrix: FeatureMatrix, config: FitConfig) -> ScoreModel:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        return fit_matrix(matrix, config)


def _subset(matrix: FeatureMatrix, rows: np.ndarray) -> FeatureMatrix:
    return matrix._replace(
        X=matrix.X[rows],
        y=matrix.y[rows],
        ids=tuple(matrix.ids[i] for i in np.flatnonzero(rows)),
        falls=matrix.falls[rows],
    )


def _run_fold(
    matrix: FeatureMatrix, folds: np.ndarray, fold: int, config: FitConfig
) -> Dict[str, Any]:
    train = folds != fold
    test = folds == fold
    baseline = baseline_model(matrix.dictionary)
    scores = {BASELINE: matrix.X[test] @ baseline.beta}
    models = {}
    for name, inputs in _model_inputs(matrix).items():
        model = _fit_quietly(_subset(inputs, train), config)
        models[name] = model
        scores[name] = inputs.X[test] @ model.beta
    return {"fold": fold, "scores": scores, "models": models}


def _metrics_row(
    name: str, fold: int, scores: np.ndarray, y: np.ndarray, converged: bool
) -> Dict[str, Any]:
    low, high = category_confusion(scores, y)
    return {
        "model": name,
        "fold": fold,
        "auc_roc": auc_roc(scores, y),
        "auc_pr": auc_pr(scores, y),
        "tpr_low": low.tpr,
        "fpr_low": low.fpr,
        "tpr_high": high.tpr,
        "fpr_high": high.fpr,
        "converged": converged,
    }


@beartype
def cross_validate(
    matrix: FeatureMatrix,
    config: FitConfig = FitConfig(),
    k: Int = 5,
    seed: Int = 0,
    workers: int = 1,
) -> CrossValidationResult:
    """
    Stratified k-fold evaluation of the fixed JHFRAT score against the
    optimized score on the 18 JHFRAT items and, for augmented matrices, the
    optimized score on all features.

    Parameters
    ----------
    matrix : FeatureMatrix
        Labeled feature matrix
    config : FitConfig
        Solver settings shared by every fit
    k : int (default=5)
        Number of folds
    seed : int (default=0)
        Fold shuffle seed
    workers : int (default=1)
        Folds fitted in parallel. See :class:`joblib.Parallel`.

    Returns
    -------
    result : CrossValidationResult

    Warns
    -----
    ConvergenceWarning
        Once, naming every fold fit that did not converge.
    """
    check_argument(matrix.labeled, "every row of the matrix needs a binary label")
    folds = stratified_kfold(matrix.ids, matrix.y, k, seed)
    outcomes = Parallel(n_jobs=workers)(
        delayed(_run_fold)(matrix, folds, fold, config) for fold in range(int(k))
    )

    oof = pd.DataFrame(
        {
            "id": list(matrix.ids),
            "y": matrix.y,
            "fall": matrix.falls,
            "fold": folds,
        }
    )
    names = [BASELINE] + list(_model_inputs(matrix))
    rows: List[Dict[str, Any]] = []
    coefficients: Dict[str, List[np.ndarray]] = {name: [] for name in names[1:]}
    failed: List[str] = []
    for outcome in outcomes:
        fold = outcome["fold"]
        test = folds == fold
        for name in names:
            scores = outcome["scores"][name]
            oof.loc[test, f"score_{name}"] = scores
            converged = True
            if name != BASELINE:
                model = outcome["models"][name]
                converged = bool(model.metadata.converged)
                coefficients[name].append(model.beta)
                if not converged:
                    failed.append(f"{name} fold {fold}")
            rows.append(_metrics_row(name, fold, scores, matrix.y[test], converged))
    fold_metrics = pd.DataFrame(rows)

    final_models = {BASELINE: baseline_model(matrix.dictionary)}
    for name, inputs in _model_inputs(matrix).items():
        model = _fit_quietly(inputs, config)
        if not model.metadata.converged:
            failed.append(f"{name} full data")
        final_models[name] = model
    if failed:
        msg = f"Score optimization did not converge for: {', '.join(failed)}"
        logger.warning(msg)
        warnings.warn(msg, ConvergenceWarning)

    coefficient_tables = {
        name: pd.DataFrame(
            np.vstack(vectors),
            columns=list(final_models[name].feature_names),
            index=pd.Index(range(int(k)), name="fold"),
        )
        for name, vectors in coefficients.items()
    }
    summary = _summarize(fold_metrics, oof, names)
    return CrossValidationResult(
        folds, fold_metrics, oof, coefficient_tables, summary, final_models
    )


def _summarize(
    fold_metrics: pd.DataFrame, oof: pd.DataFrame, names: List[str]
) -> pd.DataFrame:
    rows = []
    y = oof["y"].to_numpy()
    for name in names:
        per_fold = fold_metrics[fold_metrics["model"] == name]
        pooled = oof[f"score_{name}"].to_numpy()
        rows.append(
            {
                "model": name,
                "auc_roc_mean": float(per_fold["auc_roc"].mean()),
                "auc_roc_sd": float(per_fold["auc_roc"].std(ddof=1)),
                "auc_roc_pooled": auc_roc(pooled, y),
                "auc_pr_mean": float(per_fold["auc_pr"].mean()),
                "auc_pr_sd": float(per_fold["auc_pr"].std(ddof=1)),
                "auc_pr_pooled": auc_pr(pooled, y),
            }
        )
    return pd.DataFrame(rows).set_index("model")
