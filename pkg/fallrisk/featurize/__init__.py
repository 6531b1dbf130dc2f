# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .dictionary import (
    EHR_GROUPS,
    FeatureDictionary,
    FeatureSpec,
    build_dictionary,
    check_dictionary,
)
from .features import (
    UNLABELED,
    FeatureMatrix,
    average_jhfrat,
    baseline_jhfrat_score,
    bin_ehr,
    build_matrix,
    encounter_matrix,
    jhfrat_only,
    occurrence_rates,
)
from .io import dictionary_path, read_matrix, write_matrix

__all__ = [
    "EHR_GROUPS",
    "FeatureDictionary",
    "FeatureMatrix",
    "FeatureSpec",
    "UNLABELED",
    "average_jhfrat",
    "baseline_jhfrat_score",
    "bin_ehr",
    "build_dictionary",
    "build_matrix",
    "check_dictionary",
    "dictionary_path",
    "encounter_matrix",
    "jhfrat_only",
    "occurrence_rates",
    "read_matrix",
    "write_matrix",
]
