# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .concordance import RISK_LABELS, STRATA, concordance_table, risk_label_names
from .diagnostics import intervention_correlation, intervention_frame
from .metrics import (
    ConfusionRates,
    auc_pr,
    auc_roc,
    category_confusion,
    pr_points,
    roc_points,
    spearman,
    threshold_confusion,
)
from .report import EvalReport, evaluate_cohort, report_summary, write_report
from .sensitivity import (
    SWEEP_LAMBDAS,
    SWEEP_THRESHOLDS,
    SweepPoint,
    SweepResult,
    lambda_sweep,
    sensitivity_sweep,
    share_ranges,
)
from .stability import coefficient_shares, stability_stats
from .validation import (
    AUGMENTED,
    BASELINE,
    OPTIMIZED,
    CrossValidationResult,
    cross_validate,
    stratified_kfold,
)

__all__ = [
    "AUGMENTED",
    "BASELINE",
    "ConfusionRates",
    "CrossValidationResult",
    "EvalReport",
    "OPTIMIZED",
    "RISK_LABELS",
    "STRATA",
    "SWEEP_LAMBDAS",
    "SWEEP_THRESHOLDS",
    "SweepPoint",
    "SweepResult",
    "auc_pr",
    "auc_roc",
    "category_confusion",
    "coefficient_shares",
    "concordance_table",
    "cross_validate",
    "evaluate_cohort",
    "intervention_correlation",
    "intervention_frame",
    "lambda_sweep",
    "pr_points",
    "report_summary",
    "risk_label_names",
    "roc_points",
    "sensitivity_sweep",
    "share_ranges",
    "spearman",
    "stability_stats",
    "stratified_kfold",
    "threshold_confusion",
    "write_report",
]
