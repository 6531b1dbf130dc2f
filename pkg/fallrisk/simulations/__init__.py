# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .synth import (
    GROUND_TRUTH_ITEM_EFFECTS,
    NONTARGETED_KINDS,
    SynthConfig,
    SyntheticCohort,
    check_synth_config,
    generate,
    trait_prevalences,
    write_truth,
)

__all__ = [
    "GROUND_TRUTH_ITEM_EFFECTS",
    "NONTARGETED_KINDS",
    "SynthConfig",
    "SyntheticCohort",
    "check_synth_config",
    "generate",
    "trait_prevalences",
    "write_truth",
]
