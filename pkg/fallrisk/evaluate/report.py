# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np
import pandas as pd
from beartype import beartype

from fallrisk.cohort import Cohort
from fallrisk.featurize import (
    FeatureMatrix,
    build_matrix,
    jhfrat_only,
    occurrence_rates,
)
from fallrisk.jhfrat import JHFRAT_ITEM_NAMES
from fallrisk.scoring import (
    ScoreDifferential,
    categorize,
    category_transitions,
    score_differential,
)
from fallrisk.solver import FitConfig, baseline_model
from fallrisk.types import Dict, Int, List
from fallrisk.utils import PathType, atomic_write, dumps

from .concordance import concordance_table, risk_label_names
from .diagnostics import intervention_correlation
from .metrics import category_confusion
from .stability import stability_stats
from .validation import BASELINE, CrossValidationResult, cross_validate

logger = logging.getLogger(__name__)


class EvalReport(NamedTuple):
    """
    Everything the evaluation of one labeled cohort produces.

    Attributes
    ----------
    cv : CrossValidationResult
        Fold metrics, out-of-fold scores and coefficients
    unknown_scores : pd.DataFrame
        Scores of the Indeterminate encounters under the models fitted on all
        labeled rows
    confusion : pd.DataFrame
        Pooled out-of-fold true and false positive rates at both thresholds
    concordance : pd.DataFrame
        Risk label by predicted category per model, fall and non-fall strata
    differentials : Dict[str, ScoreDifferential]
        Each fitted model against the fixed JHFRAT score on the labeled rows
    transitions : pd.DataFrame
        Band changes from the JHFRAT score to each fitted model
    stability : pd.DataFrame
        Spread of the JHFRAT item shares across folds, per fitted model
    occurrence : pd.Series
        Mean of every feature over the labeled rows
    intervention_correlation : float
        Spearman correlation of mean assessed JHFRAT score and mean daily
        targeted interventions over the cohort
    settings : Dict[str, Any]
        Folds, seed and solver settings the report was produced with
    """

    cv: CrossValidationResult
    unknown_scores: pd.DataFrame
    confusion: pd.DataFrame
    concordance: pd.DataFrame
    differentials: Dict[str, ScoreDifferential]
    transitions: pd.DataFrame
    stability: pd.DataFrame
    occurrence: pd.Series
    intervention_correlation: float
    label_counts: Dict[str, int]
    exclusion_tally: Dict[str, int]
    n_promoted: int
    settings: Dict[str, Any]


def _model_matrix(matrix: FeatureMatrix, model: str) -> FeatureMatrix:
    return matrix if model in (BASELINE, "augmented") else jhfrat_only(matrix)


@beartype
def evaluate_cohort(
    cohort: Cohort,
    config: FitConfig = FitConfig(),
    k: Int = 5,
    seed: Int = 0,
    augmented: bool = True,
    workers: int = 1,
) -> EvalReport:
    """
    Cross-validates the fixed and optimized scores on a labeled cohort and
    assembles every table of the evaluation.

    Parameters
    ----------
    cohort : Cohort
        Output of :func:`~fallrisk.cohort.build_cohort`
    config : FitConfig
        Solver settings
    k : int (default=5)
        Number of folds
    seed : int (default=0)
        Fold shuffle seed
    augmented : bool (default=True)
        Include the model fitted on the EHR-augmented features
    workers : int (default=1)
        Parallel fold fits

    Returns
    -------
    report : EvalReport
    """
    matrix = build_matrix(cohort, augmented=augmented)
    unknown = build_matrix(cohort, augmented=augmented, include_unknown=True)
    cv = cross_validate(matrix, config, k=k, seed=seed, workers=workers)
    oof = cv.oof_scores
    y = matrix.y

    unknown_scores = pd.DataFrame({"id": list(unknown.ids), "fall": unknown.falls})
    for name, model in cv.final_models.items():
        unknown_scores[f"score_{name}"] = _model_matrix(unknown, name).X @ model.beta

    confusion_rows: List[Dict[str, Any]] = []
    concordance_blocks: List[pd.DataFrame] = []
    labels = np.concatenate([risk_label_names(y), risk_label_names(unknown.y)])
    falls = np.concatenate([matrix.falls, unknown.falls])
    for name, model in cv.final_models.items():
        scores = oof[f"score_{name}"].to_numpy()
        for rates in category_confusion(scores, y, model.thresholds):
            confusion_rows.append({"model": name, **rates._asdict()})
        bands = np.concatenate(
            [
                categorize(scores, model.thresholds),
                categorize(unknown_scores[f"score_{name}"], model.thresholds),
            ]
        )
        block = concordance_table(bands, labels, falls)
        block.insert(0, "model", name)
        concordance_blocks.append(block)

    differentials: Dict[str, ScoreDifferential] = {}
    transition_blocks: List[pd.DataFrame] = []
    stability_blocks: List[pd.DataFrame] = []
    for name, model in cv.final_models.items():
        if name == BASELINE:
            continue
        inputs = _model_matrix(matrix, name)
        reference = baseline_model(inputs.dictionary)
        differentials[name] = score_differential(model, reference, inputs.X)
        transitions = category_transitions(reference, model, inputs)
        transitions.insert(0, "model", name)
        transition_blocks.append(transitions)
        stats = stability_stats(cv.coefficients[name], subset=JHFRAT_ITEM_NAMES)
        stats.insert(0, "model", name)
        stability_blocks.append(stats.reset_index())

    correlation = intervention_correlation([r.encounter for r in cohort.records])
    logger.info(
        "Evaluation: "
        + ", ".join(
            f"{name} AUC-ROC {row.auc_roc_mean:.3f}"
            for name, row in cv.summary.iterrows()
        )
    )
    return EvalReport(
        cv=cv,
        unknown_scores=unknown_scores,
        confusion=pd.DataFrame(confusion_rows),
        concordance=pd.concat(concordance_blocks, ignore_index=True),
        differentials=differentials,
        transitions=pd.concat(transition_blocks, ignore_index=True),
        stability=pd.concat(stability_blocks, ignore_index=True),
        occurrence=occurrence_rates(matrix),
        intervention_correlation=correlation,
        label_counts=dict(cohort.label_counts),
        exclusion_tally=dict(cohort.exclusion_tally),
        n_promoted=cohort.n_promoted,
        settings={
            "folds": int(k),
            "seed": int(seed),
            "augmented": augmented,
            "config": config._asdict(),
        },
    )


def report_summary(report: EvalReport) -> Dict[str, Any]:
    """
    JSON-ready aggregate of the headline metrics. Both the mean of the fold
    AUCs and the AUC of the pooled out-of-fold scores are reported.
    """
    models: Dict[str, Any] = {}
    for name, row in report.cv.summary.iterrows():
        entry: Dict[str, Any] = {key: float(value) for key, value in row.items()}
        rates = report.confusion[report.confusion["model"] == name]
        entry["confusion"] = {
            ("low" if r.inclusive else "high"): {
                "threshold": r.threshold,
                "tpr": r.tpr,
                "fpr": r.fpr,
            }
            for r in rates.itertuples()
        }
        if name in report.differentials:
            differential = report.differentials[name]
            entry["differential"] = {
                "mean": differential.mean,
                "share_within_2": differential.share_within_2,
                "share_within_5": differential.share_within_5,
            }
            model = report.cv.final_models[name]
            entry["converged"] = bool(model.metadata.converged)
            entry["coefficients"] = model.coefficients()
        models[str(name)] = entry
    return {
        "exclusion_tally": report.exclusion_tally,
        "intervention_correlation": report.intervention_correlation,
        "label_counts": report.label_counts,
        "models": models,
        "n_labeled": int(len(report.cv.oof_scores)),
        "n_promoted": report.n_promoted,
        "n_unknown": int(len(report.unknown_scores)),
        "settings": report.settings,
    }


def write_report(directory: PathType, report: EvalReport) -> List[Path]:
    """
    Writes the evaluation tables as CSV and the summary as ``summary.json``
    into ``directory``.

    Returns
    -------
    paths : List[Path]
        Every file written
    """
    directory = Path(directory)
    coefficients = pd.concat(
        [table.assign(model=name) for name, table in report.cv.coefficients.items()]
    ).reset_index()
    deltas = pd.concat(
        [
            pd.DataFrame(
                {
                    "id": list(report.cv.oof_scores["id"]),
                    "model": name,
                    "delta": differential.deltas,
                }
            )
            for name, differential in report.differentials.items()
        ],
        ignore_index=True,
    )
    tables = {
        "fold_metrics.csv": report.cv.fold_metrics,
        "oof_scores.csv": report.cv.oof_scores,
        "unknown_scores.csv": report.unknown_scores,
        "coefficients.csv": coefficients,
        "confusion.csv": report.confusion,
        "concordance.csv": report.concordance,
        "transitions.csv": report.transitions,
        "stability.csv": report.stability,
        "differentials.csv": deltas,
        "occurrence_rates.csv": report.occurrence.rename("rate")
        .rename_axis("feature")
        .reset_index(),
    }
    paths = []
    for filename, frame in tables.items():
        path = directory / filename
        with atomic_write(path) as handle:
            frame.to_csv(handle, index=False, float_format="%.10g")
        paths.append(path)
    path = directory / "summary.json"
    with atomic_write(path) as handle:
        handle.write(dumps(report_summary(report)))
        handle.write("\n")
    paths.append(path)
    logger.info(f"Wrote {len(paths)} report files to {directory}")
    return paths
