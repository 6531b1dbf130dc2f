# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .constraints import (
    ConstraintSet,
    check_constraints,
    default_constraints,
    from_pairs,
)
from .cso import fit, fit_matrix, kkt_residuals
from .model import (
    FitConfig,
    FitMetadata,
    KKTReport,
    ScoreModel,
    baseline_model,
    check_fit_config,
    jhfrat_coefficients,
)
from .objective import gradient, hessian, log_likelihood, objective, sample_weights

__all__ = [
    "ConstraintSet",
    "FitConfig",
    "FitMetadata",
    "KKTReport",
    "ScoreModel",
    "baseline_model",
    "check_constraints",
    "check_fit_config",
    "default_constraints",
    "fit",
    "fit_matrix",
    "from_pairs",
    "gradient",
    "hessian",
    "jhfrat_coefficients",
    "kkt_residuals",
    "log_likelihood",
    "objective",
    "sample_weights",
]
