# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
from typing import Optional, Sequence

from beartype import beartype

from fallrisk.types import Dict, List, Tuple

from .classes import Encounter

logger = logging.getLogger(__name__)

MIN_LENGTH_DAYS = 2
MAX_LENGTH_DAYS = 21
MIN_ASSESSMENTS = 3
EARLIEST_FALL_DAY = 3
LATEST_FALL_DAY = 21

EXCLUSION_REASONS: Tuple[str, ...] = (
    "too_short",
    "too_long",
    "too_few_assessments",
    "early_fall",
    "late_fall",
)


def truncate_at_fall(encounter: Encounter) -> Encounter:
    """
    Keeps only the intervention days and assessments strictly before the first
    documented fall. Encounters without a fall are returned unchanged.

    The truncated encounter keeps its ``fall_day``, which then equals
    ``admit_length_days + 1``.
    """
    fall_day = encounter.fall_day
    if fall_day is None:
        return encounter
    kept_days = fall_day - 1
    return encounter._replace(
        admit_length_days=kept_days,
        daily_targeted=encounter.daily_targeted[:kept_days],
        daily_nontargeted=encounter.daily_nontargeted[:kept_days],
        assessments=tuple(
            record for record in encounter.assessments if record.day < fall_day
        ),
    )


def _exclusion_reason(encounter: Encounter) -> Optional[str]:
    fall_day = encounter.fall_day
    if fall_day is not None:
        if fall_day < EARLIEST_FALL_DAY:
            return "early_fall"
        if fall_day > LATEST_FALL_DAY:
            return "late_fall"
    if encounter.admit_length_days < MIN_LENGTH_DAYS:
        return "too_short"
    if encounter.admit_length_days > MAX_LENGTH_DAYS:
        return "too_long"
    if len(encounter.assessments) < MIN_ASSESSMENTS:
        return "too_few_assessments"
    return None


@beartype
def apply_exclusions(
    encounters: Sequence[Encounter],
) -> Tuple[List[Encounter], Dict[str, int]]:
    """
    Applies the study inclusion criteria and truncates fall encounters at their
    first fall.

    Fall timing is checked first (falls before day 3 or after day 21 exclude the
    encounter), then fall encounters are truncated, and the length of stay
    (2 - 21 full days) and the number of assessments (at least 3) are checked on
    what remains. Each excluded encounter is tallied under the first criterion
    it fails.

    Parameters
    ----------
    encounters : Sequence[Encounter]
        Raw encounters

    Returns
    -------
    kept : List[Encounter]
        Included encounters, truncated where they had a fall
    exclusion_tally : Dict[str, int]
        Number of excluded encounters per reason; every reason is present

    Examples
    --------
    >>> from fallrisk.cohort import Demographics, Encounter
    >>> demo = Demographics(70, "female", "white", "medicine", 2)
    >>> short = Encounter("e1", "h", 1, (0,), (frozenset(),), (), demo)
    >>> kept, tally = apply_exclusions([short])
    >>> len(kept), tally["too_short"]
    (0, 1)
    """
    tally = {reason: 0 for reason in EXCLUSION_REASONS}
    kept: List[Encounter] = []
    for encounter in encounters:
        fall_day = encounter.fall_day
        if fall_day is not None and EARLIEST_FALL_DAY <= fall_day <= LATEST_FALL_DAY:
            candidate = truncate_at_fall(encounter)
        else:
            candidate = encounter
        reason = _exclusion_reason(candidate)
        if reason is None:
            kept.append(candidate)
        else:
            tally[reason] += 1
    logger.info(
        f"Kept {len(kept)} of {len(encounters)} encounters; excluded "
        + ", ".join(f"{reason}={count}" for reason, count in tally.items())
    )
    return kept, tally
