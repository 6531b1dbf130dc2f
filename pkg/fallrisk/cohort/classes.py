# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from fractions import Fraction
from typing import NamedTuple, Optional, Union

from fallrisk.jhfrat import JHFRAT_ITEM_NAMES, SINGLE_SELECT_GROUPS
from fallrisk.preconditions import check_input
from fallrisk.types import Dict, FrozenSet, RiskLabelName, Tuple

SEXES: Tuple[str, ...] = ("female", "male")

RACES: Tuple[str, ...] = ("black", "white", "other")

SERVICES: Tuple[str, ...] = (
    "medicine",
    "surgery",
    "oncology_hematology",
    "neurosurgery",
    "orthopedics",
    "neurology",
    "other",
)

__all__ = [
    "AssessmentRecord",
    "Cohort",
    "Demographics",
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
    "check_encounter",
]


class AssessmentRecord(NamedTuple):
    """
    One JHFRAT assessment, optionally with the mobility measures charted at the
    same time.
    """

    day: int
    """
    1-based encounter day the assessment was recorded on.
    """

    jhfrat_items: FrozenSet[str]
    """
    Names of the JHFRAT items flagged on this assessment; every other item is 0.
    """

    jhhlm: Optional[int] = None
    """
    Johns Hopkins Highest Level of Mobility, 1 - 8.
    """

    ampac: Optional[float] = None
    """
    AM-PAC basic mobility score, any non-negative scale.
    """


class Demographics(NamedTuple):
    age_years: int
    sex: str
    race: str
    service: str
    comorbidity_count: int


class Encounter(NamedTuple):
    """
    One inpatient stay: the daily intervention series, the repeated
    assessments and the demographics.
    """

    id: str
    hospital: str
    admit_length_days: int
    daily_targeted: Tuple[int, ...]
    daily_nontargeted: Tuple[FrozenSet[str], ...]
    assessments: Tuple[AssessmentRecord, ...]
    demographics: Demographics
    fall_day: Optional[int] = None

    @property
    def truncated(self) -> bool:
        """
        True when the encounter was cut at its first fall.
        """
        return self.fall_day is not None and self.fall_day > self.admit_length_days


class WindowSum(NamedTuple):
    """
    Targeted interventions summed over one (edge padded) window, with the
    original days the window covers.
    """

    first_day: int
    last_day: int
    total: int


class WindowRun(NamedTuple):
    """
    A maximal run of consecutive windows that all meet one labeling criterion.
    """

    criterion: RiskLabelName
    start_day: int
    end_day: int
    span: int


class RiskLabel(NamedTuple):
    label: RiskLabelName
    evidence: Tuple[WindowRun, ...] = ()


class LabelingPolicy(NamedTuple):
    """
    Thresholds of the intervention window labeling rule.

    Parameters
    ----------
    low_max_per_window : int (default=1)
        A window counts towards Low when its targeted total is at most this.
    high_min_per_window : int (default=6)
        A window counts towards High when its targeted total is at least this.
    window_days : int (default=3)
        Length of the overlapping windows.
    stretch_fraction : Fraction (default=1/2)
        Share of the encounter a qualifying run has to cover.
    edge_doubling : bool (default=True)
        Count the first and last day twice before windowing.
    """

    low_max_per_window: int = 1
    high_min_per_window: int = 6
    window_days: int = 3
    stretch_fraction: Union[Fraction, float] = Fraction(1, 2)
    edge_doubling: bool = True


class FallMatch(NamedTuple):
    fall_encounter_id: str
    matched_ids: Tuple[str, ...]


class LabeledEncounter(NamedTuple):
    encounter: Encounter
    label: RiskLabel
    promoted: bool = False

    @property
    def y(self) -> Optional[int]:
        """
        Binary training label: 0 for Low, 1 for High or promoted Indeterminate
        encounters, None otherwise.
        """
        if self.label.label == "Low":
            return 0
        if self.label.label == "High" or self.promoted:
            return 1
        return None


class Cohort(NamedTuple):
    """
    Labeled encounters together with the bookkeeping of how they were selected.
    """

    records: Tuple[LabeledEncounter, ...]
    exclusion_tally: Dict[str, int]
    label_counts: Dict[str, int]
    """
    Counts of the rule labels, before fall-encounter matching.
    """
    matches: Tuple[FallMatch, ...] = ()

    @property
    def n_promoted(self) -> int:
        return sum(1 for record in self.records if record.promoted)

    def binary(self) -> Tuple[LabeledEncounter, ...]:
        return tuple(record for record in self.records if record.y is not None)

    def unknown(self) -> Tuple[LabeledEncounter, ...]:
        return tuple(record for record in self.records if record.y is None)


def check_encounter(encounter: Encounter, allow_truncated: bool = False) -> None:
    """
    Validates the structural invariants of an :class:`Encounter`.

    Parameters
    ----------
    encounter : Encounter
        The encounter to validate
    allow_truncated : bool (default=False)
        Accept encounters already cut at their first fall, i.e. with
        ``fall_day == admit_length_days + 1``.

    Raises
    ------
    InvalidInputError
        If any invariant is violated.
    """
    eid = encounter.id
    length = encounter.admit_length_days
    check_input(length >= 1, f"encounter {eid}: admit_length_days must be >= 1")
    check_input(
        len(encounter.daily_targeted) == length,
        f"encounter {eid}: daily_targeted has {len(encounter.daily_targeted)} "
        f"entries for {length} days",
    )
    check_input(
        len(encounter.daily_nontargeted) == length,
        f"encounter {eid}: daily_nontargeted has "
        f"{len(encounter.daily_nontargeted)} entries for {length} days",
    )
    check_input(
        all(count >= 0 for count in encounter.daily_targeted),
        f"encounter {eid}: targeted counts must be non-negative",
    )
    if encounter.fall_day is not None:
        last_allowed = length + 1 if allow_truncated else length
        check_input(
            1 <= encounter.fall_day <= last_allowed,
            f"encounter {eid}: fall_day {encounter.fall_day} outside [1, "
            f"{last_allowed}]",
        )
    previous_day = 0
    for record in encounter.assessments:
        check_input(
            record.day >= previous_day,
            f"encounter {eid}: assessments are not time ordered",
        )
        previous_day = record.day
        check_input(record.day >= 1, f"encounter {eid}: assessment day must be >= 1")
        unknown = record.jhfrat_items.difference(JHFRAT_ITEM_NAMES)
        check_input(
            not unknown,
            f"encounter {eid}: unknown JHFRAT items {sorted(unknown)}",
        )
        for group, members in SINGLE_SELECT_GROUPS.items():
            check_input(
                len(record.jhfrat_items.intersection(members)) <= 1,
                f"encounter {eid}: more than one {group} item on day {record.day}",
            )
        if record.jhhlm is not None:
            check_input(
                1 <= record.jhhlm <= 8,
                f"encounter {eid}: jhhlm {record.jhhlm} outside 1-8",
            )
        if record.ampac is not None:
            check_input(
                record.ampac >= 0, f"encounter {eid}: ampac must be non-negative"
            )
    demographics = encounter.demographics
    check_input(
        demographics.sex in SEXES, f"encounter {eid}: unknown sex {demographics.sex}"
    )
    check_input(
        demographics.race in RACES,
        f"encounter {eid}: unknown race {demographics.race}",
    )
    check_input(
        demographics.service in SERVICES,
        f"encounter {eid}: unknown service {demographics.service}",
    )
    check_input(
        demographics.comorbidity_count >= 0,
        f"encounter {eid}: comorbidity_count must be non-negative",
    )
