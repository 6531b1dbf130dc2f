# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
from typing import Optional, Sequence

from beartype import beartype

from fallrisk.types import FrozenSet, Int, List, Tuple

from .classes import Encounter, FallMatch, LabelingPolicy

logger = logging.getLogger(__name__)

MAX_MATCHES = 3


def _kinds_in(encounter: Encounter, start: int, stop: int) -> FrozenSet[str]:
    kinds: FrozenSet[str] = frozenset()
    for day_kinds in encounter.daily_nontargeted[start:stop]:
        kinds = kinds | day_kinds
    return kinds


def pre_fall_window(
    encounter: Encounter, window_days: int = 3
) -> Optional[Tuple[int, int]]:
    """
    Zero-based ``[start, stop)`` day slice of the ``window_days`` days immediately
    before the first fall, or None when the encounter has no fall or not enough
    days before it.
    """
    if encounter.fall_day is None:
        return None
    stop = encounter.fall_day - 1
    start = stop - window_days
    if start < 0 or stop > len(encounter.daily_targeted):
        return None
    return start, stop


def _best_shared_kinds(
    candidate: Encounter,
    pattern: Tuple[int, ...],
    reference_kinds: FrozenSet[str],
) -> Optional[int]:
    width = len(pattern)
    counts = candidate.daily_targeted
    best: Optional[int] = None
    for start in range(len(counts) - width + 1):
        if tuple(counts[start : start + width]) != pattern:
            continue
        shared = len(_kinds_in(candidate, start, start + width) & reference_kinds)
        if best is None or shared > best:
            best = shared
    return best


@beartype
def match_fall_encounters(
    high_fall: Sequence[Encounter],
    indeterminate: Sequence[Encounter],
    policy: LabelingPolicy = LabelingPolicy(),
    max_matches: Int = MAX_MATCHES,
) -> List[FallMatch]:
    """
    Finds Indeterminate encounters whose intervention pattern mirrors the days
    leading up to a fall.

    For each High fall encounter the targeted counts of the ``window_days`` days
    before the fall form an ordered pattern. An Indeterminate encounter matches
    when any of its (unpadded) windows has exactly that pattern. Of the matches,
    up to ``max_matches`` sharing the most non-targeted intervention kinds with
    the pre-fall window are kept, ties broken by ascending encounter id.

    Parameters
    ----------
    high_fall : Sequence[Encounter]
        High labeled encounters with a documented fall
    indeterminate : Sequence[Encounter]
        The pool of Indeterminate encounters
    policy : LabelingPolicy
        Supplies the window length
    max_matches : int (default=3)
        Maximum number of matches kept per fall encounter

    Returns
    -------
    matches : List[FallMatch]
        One entry per fall encounter with a full pre-fall window, in the order
        given. Fall encounters without a full pre-fall window are skipped and
        logged.
    """
    matches: List[FallMatch] = []
    for fall_encounter in high_fall:
        window = pre_fall_window(fall_encounter, policy.window_days)
        if window is None:
            logger.warning(
                f"Fall encounter {fall_encounter.id} has no full "
                f"{policy.window_days}-day window before its fall; skipping"
            )
            continue
        start, stop = window
        pattern = tuple(int(c) for c in fall_encounter.daily_targeted[start:stop])
        reference_kinds = _kinds_in(fall_encounter, start, stop)

        ranked: List[Tuple[int, str]] = []
        for candidate in indeterminate:
            shared = _best_shared_kinds(candidate, pattern, reference_kinds)
            if shared is not None:
                ranked.append((-shared, candidate.id))
        ranked.sort()
        selected = tuple(eid for _, eid in ranked[:max_matches])
        logger.debug(
            f"Fall encounter {fall_encounter.id}: pattern {pattern}, "
            f"{len(ranked)} candidate(s), selected {selected}"
        )
        matches.append(FallMatch(fall_encounter.id, selected))
    return matches
