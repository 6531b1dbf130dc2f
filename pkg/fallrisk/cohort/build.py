# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
from typing import Sequence

from beartype import beartype

from fallrisk.preconditions import EmptyCohortError
from fallrisk.types import Set

from .classes import Cohort, Encounter, LabeledEncounter, LabelingPolicy
from .exclusions import apply_exclusions
from .labeling import check_policy, label_encounter
from .matching import match_fall_encounters

logger = logging.getLogger(__name__)


@beartype
def build_cohort(
    encounters: Sequence[Encounter], policy: LabelingPolicy = LabelingPolicy()
) -> Cohort:
    """
    Builds the study cohort: exclusions, window labeling and promotion of
    Indeterminate encounters that match a High fall encounter.

    The binary cohort is every Low encounter (``y = 0``) plus every High or
    promoted encounter (``y = 1``). Remaining Indeterminate encounters stay in
    the cohort for reporting but carry no binary label.

    Parameters
    ----------
    encounters : Sequence[Encounter]
        Raw encounters
    policy : LabelingPolicy
        Labeling thresholds

    Returns
    -------
    cohort : Cohort

    Raises
    ------
    EmptyCohortError
        If no encounter ends up with a binary label.
    """
    check_policy(policy)
    kept, tally = apply_exclusions(encounters)
    labels = [label_encounter(encounter, policy) for encounter in kept]

    high_fall = [
        encounter
        for encounter, label in zip(kept, labels)
        if label.label == "High" and encounter.fall_day is not None
    ]
    indeterminate = [
        encounter
        for encounter, label in zip(kept, labels)
        if label.label == "Indeterminate"
    ]
    matches = match_fall_encounters(high_fall, indeterminate, policy)
    promoted: Set[str] = set()
    for match in matches:
        promoted.update(match.matched_ids)

    records = tuple(
        LabeledEncounter(encounter, label, encounter.id in promoted)
        for encounter, label in zip(kept, labels)
    )
    label_counts = {"Low": 0, "High": 0, "Indeterminate": 0}
    for label in labels:
        label_counts[label.label] += 1

    cohort = Cohort(records, tally, label_counts, tuple(matches))
    if not cohort.binary():
        raise EmptyCohortError(
            f"No Low or High encounters among {len(encounters)} input encounters"
        )
    logger.info(
        f"Cohort: {label_counts['Low']} Low, {label_counts['High']} High, "
        f"{label_counts['Indeterminate']} Indeterminate; {len(promoted)} "
        f"promoted through {len(high_fall)} High fall encounters"
    )
    return cohort
