# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import math
from fractions import Fraction
from typing import Callable, Sequence

from beartype import beartype

from fallrisk.preconditions import (
    InvalidInputError,
    InvariantViolationError,
    check_argument,
)
from fallrisk.types import Int, List, RiskLabelName

from .classes import Encounter, LabelingPolicy, RiskLabel, WindowRun, WindowSum

__all__ = [
    "check_policy",
    "label_encounter",
    "label_order",
    "padded_windows",
    "required_span",
]


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(str(value)).limit_denominator(10**6)


def check_policy(policy: LabelingPolicy) -> None:
    """
    Validates a :class:`LabelingPolicy`.

    Raises
    ------
    ValueError
        If the thresholds, window length or stretch fraction are out of range.
    """
    check_argument(
        0 <= policy.low_max_per_window < policy.high_min_per_window,
        "policy requires 0 <= low_max_per_window < high_min_per_window, got "
        f"{policy.low_max_per_window} and {policy.high_min_per_window}",
    )
    check_argument(policy.window_days >= 1, "window_days must be >= 1")
    fraction = _as_fraction(policy.stretch_fraction)
    check_argument(
        0 < fraction <= 1, f"stretch_fraction must be in (0, 1], got {fraction}"
    )


@beartype
def padded_windows(
    daily_targeted: Sequence[Int], policy: LabelingPolicy = LabelingPolicy()
) -> List[WindowSum]:
    """
    Sums targeted interventions over every overlapping window of
    ``policy.window_days`` entries.

    With edge doubling the first and last day are counted twice, i.e. the
    windows run over ``[d1, d1, d2, ..., dn, dn]``; a single day is doubled
    once, to ``[d1, d1]``. Each window records the original days it covers.

    Parameters
    ----------
    daily_targeted : Sequence[int]
        Targeted intervention count per day
    policy : LabelingPolicy
        Window length and edge handling

    Returns
    -------
    windows : List[WindowSum]
        ``padded_length - window_days + 1`` windows, in day order

    Raises
    ------
    InvalidInputError
        If the sequence is empty or too short to hold a single full window.

    Examples
    --------
    >>> [window.total for window in padded_windows([2, 0, 1])]
    [4, 3, 2]
    """
    windows = _window_sums(daily_targeted, policy)
    if not windows:
        raise InvalidInputError(
            f"{len(daily_targeted)} day(s) cannot hold a full "
            f"{policy.window_days}-day window"
        )
    return windows


def _window_sums(
    daily_targeted: Sequence[Int], policy: LabelingPolicy
) -> List[WindowSum]:
    n_days = len(daily_targeted)
    if n_days < 1:
        raise InvalidInputError("daily_targeted must contain at least one day")
    if policy.edge_doubling and n_days == 1:
        padded = [daily_targeted[0], daily_targeted[0]]
        days = [1, 1]
    elif policy.edge_doubling:
        padded = [daily_targeted[0], *daily_targeted, daily_targeted[-1]]
        days = [1, *range(1, n_days + 1), n_days]
    else:
        padded = list(daily_targeted)
        days = list(range(1, n_days + 1))
    width = policy.window_days
    return [
        WindowSum(
            first_day=days[start],
            last_day=days[start + width - 1],
            total=int(sum(padded[start : start + width])),
        )
        for start in range(max(len(padded) - width + 1, 0))
    ]


def required_span(n_days: int, policy: LabelingPolicy) -> int:
    """
    Number of distinct days a qualifying run has to cover,
    ``ceil(stretch_fraction * n_days)``.

    >>> required_span(5, LabelingPolicy())
    3
    """
    return math.ceil(_as_fraction(policy.stretch_fraction) * n_days)


def _maximal_runs(
    windows: Sequence[WindowSum],
    accept: Callable[[WindowSum], bool],
    criterion: RiskLabelName,
) -> List[WindowRun]:
    runs: List[WindowRun] = []
    start = None
    for index, window in enumerate(windows):
        if accept(window):
            if start is None:
                start = index
            continue
        if start is not None:
            runs.append(_run(windows, start, index - 1, criterion))
            start = None
    if start is not None:
        runs.append(_run(windows, start, len(windows) - 1, criterion))
    return runs


def _run(
    windows: Sequence[WindowSum], first: int, last: int, criterion: RiskLabelName
) -> WindowRun:
    # consecutive windows overlap or touch, so the covered days are contiguous
    start_day = windows[first].first_day
    end_day = windows[last].last_day
    return WindowRun(criterion, start_day, end_day, end_day - start_day + 1)


@beartype
def label_encounter(
    encounter: Encounter, policy: LabelingPolicy = LabelingPolicy()
) -> RiskLabel:
    """
    Assigns the intervention based risk label of an encounter.

    An encounter is Low when a maximal run of consecutive windows, each with at
    most ``low_max_per_window`` targeted interventions, covers at least
    ``ceil(stretch_fraction * admit_length_days)`` distinct days; High when such
    a run exists with every window at or above ``high_min_per_window``. An
    encounter with a qualifying run of each kind received inconsistent care and
    is Indeterminate, as is one with neither. A stay too short to hold a single
    full window has no evidence either way and is Indeterminate.

    Parameters
    ----------
    encounter : Encounter
        An encounter that passed :func:`~fallrisk.cohort.apply_exclusions`
    policy : LabelingPolicy
        Window thresholds

    Returns
    -------
    label : RiskLabel
        The label and the qualifying runs that support it

    Raises
    ------
    InvariantViolationError
        If one window meets both the Low and the High criterion, which a valid
        policy makes impossible.
    """
    check_policy(policy)
    windows = _window_sums(encounter.daily_targeted, policy)
    if not windows:
        return RiskLabel("Indeterminate", ())
    for window in windows:
        if (
            window.total <= policy.low_max_per_window
            and window.total >= policy.high_min_per_window
        ):
            raise InvariantViolationError(
                f"encounter {encounter.id}: window {window} is both Low and High"
            )

    needed = required_span(len(encounter.daily_targeted), policy)
    low_runs = [
        run
        for run in _maximal_runs(
            windows, lambda w: w.total <= policy.low_max_per_window, "Low"
        )
        if run.span >= needed
    ]
    high_runs = [
        run
        for run in _maximal_runs(
            windows, lambda w: w.total >= policy.high_min_per_window, "High"
        )
        if run.span >= needed
    ]
    if low_runs and not high_runs:
        return RiskLabel("Low", tuple(low_runs))
    if high_runs and not low_runs:
        return RiskLabel("High", tuple(high_runs))
    return RiskLabel("Indeterminate", tuple(low_runs + high_runs))


def label_order(label: RiskLabelName) -> int:
    """
    Position of a label on the Low < Indeterminate < High scale.
    """
    return {"Low": 0, "Indeterminate": 1, "High": 2}[label]
