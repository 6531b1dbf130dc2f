# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

"""
Catalog of the 18 binary Johns Hopkins Fall Risk Assessment Tool items, their
published point values and the single-select categories whose ordering the
optimized score has to preserve.
"""

from typing import NamedTuple

from fallrisk.types import Dict, Tuple


class JhfratItem(NamedTuple):
    """
    One binary JHFRAT item.
    """

    name: str
    category: str
    description: str
    points: int
    occurrence_rate: float
    """
    Share of encounters with the item, averaged over the encounter. Used as the
    calibration target for synthetic cohorts.
    """


JHFRAT_ITEMS: Tuple[JhfratItem, ...] = (
    JhfratItem("age_60_69", "Age", "60 - 69 years", 1, 0.221),
    JhfratItem("age_70_79", "Age", "70 - 79 years", 2, 0.197),
    JhfratItem("age_80_plus", "Age", "Greater than or equal to 80 years", 3, 0.132),
    JhfratItem("incontinence", "Elimination", "Incontinence", 2, 0.174),
    JhfratItem("urgency_frequency", "Elimination", "Urgency or frequency", 2, 0.072),
    JhfratItem(
        "altered_awareness",
        "Cognition",
        "Altered awareness of immediate physical environment",
        1,
        0.095,
    ),
    JhfratItem("impulsive", "Cognition", "Impulsive", 2, 0.029),
    JhfratItem(
        "lack_of_understanding",
        "Cognition",
        "Lack of understanding of one's physical and cognitive limitations",
        4,
        0.047,
    ),
    JhfratItem("equipment_one", "Patient Care Equipment", "One present", 1, 0.403),
    JhfratItem("equipment_two", "Patient Care Equipment", "Two present", 2, 0.213),
    JhfratItem(
        "equipment_three_plus",
        "Patient Care Equipment",
        "Three or more present",
        3,
        0.129,
    ),
    JhfratItem(
        "fall_history",
        "Fall History",
        "One fall within 6 months before admission",
        5,
        0.119,
    ),
    JhfratItem("meds_one", "Medications", "On 1 high fall risk drug", 3, 0.337),
    JhfratItem(
        "meds_two_plus", "Medications", "On 2 or more high fall risk drugs", 5, 0.407
    ),
    JhfratItem(
        "sedated_procedure",
        "Medications",
        "Sedated procedure within past 24 hours",
        7,
        0.032,
    ),
    JhfratItem("requires_assistance", "Mobility", "Requires assistance", 2, 0.511),
    JhfratItem("unsteady_gait", "Mobility", "Unsteady gait", 2, 0.080),
    JhfratItem(
        "visual_auditory_impairment",
        "Mobility",
        "Visual or auditory impairment affecting mobility",
        2,
        0.015,
    ),
)

JHFRAT_ITEM_NAMES: Tuple[str, ...] = tuple(item.name for item in JHFRAT_ITEMS)

JHFRAT_POINTS: Dict[str, int] = {item.name: item.points for item in JHFRAT_ITEMS}

# single-select categories, items listed from lowest to highest assessed risk
SINGLE_SELECT_GROUPS: Dict[str, Tuple[str, ...]] = {
    "Age": ("age_60_69", "age_70_79", "age_80_plus"),
    "Medications": ("meds_one", "meds_two_plus", "sedated_procedure"),
    "Patient Care Equipment": (
        "equipment_one",
        "equipment_two",
        "equipment_three_plus",
    ),
}

LOW_THRESHOLD = 6.0
HIGH_THRESHOLD = 13.0

__all__ = [
    "HIGH_THRESHOLD",
    "JHFRAT_ITEMS",
    "JHFRAT_ITEM_NAMES",
    "JHFRAT_POINTS",
    "JhfratItem",
    "LOW_THRESHOLD",
    "SINGLE_SELECT_GROUPS",
]
