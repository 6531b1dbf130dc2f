# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .build import build_cohort
from .classes import (
    RACES,
    SERVICES,
    SEXES,
    AssessmentRecord,
    Cohort,
    Demographics,
    Encounter,
    FallMatch,
    LabeledEncounter,
    LabelingPolicy,
    RiskLabel,
    WindowRun,
    WindowSum,
    check_encounter,
)
from .exclusions import EXCLUSION_REASONS, apply_exclusions, truncate_at_fall
from .io import (
    encounter_from_dict,
    encounter_to_dict,
    read_cohort,
    read_encounters,
    write_cohort,
    write_encounters,
    write_exclusion_tally,
)
from .labeling import (
    check_policy,
    label_encounter,
    label_order,
    padded_windows,
    required_span,
)
from .matching import match_fall_encounters, pre_fall_window

__all__ = [
    "AssessmentRecord",
    "Cohort",
    "Demographics",
    "EXCLUSION_REASONS",
    "Encounter",
    "FallMatch",
    "LabeledEncounter",
    "LabelingPolicy",
    "RACES",
    "RiskLabel",
    "SERVICES",
    "SEXES",
    "WindowRun",
    "WindowSum",
    "apply_exclusions",
    "build_cohort",
    "check_encounter",
    "check_policy",
    "encounter_from_dict",
    "encounter_to_dict",
    "label_encounter",
    "label_order",
    "match_fall_encounters",
    "padded_windows",
    "pre_fall_window",
    "read_cohort",
    "read_encounters",
    "required_span",
    "truncate_at_fall",
    "write_cohort",
    "write_encounters",
    "write_exclusion_tally",
]
