# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

"""
JSON Lines persistence of encounters and labeled cohorts.

One encounter per line::

    {"id": "e1", "hospital": "h1", "admit_length_days": 3,
     "daily_targeted": [0, 1, 0],
     "daily_nontargeted": [["bed_alarm"], [], []],
     "assessments": [{"day": 1, "jhfrat_items": ["age_70_79"],
                      "jhhlm": 6, "ampac": 41.5}, ...],
     "demographics": {"age_years": 74, "sex": "female", "race": "white",
                      "service": "medicine", "comorbidity_count": 3},
     "fall_day": null}

``jhfrat_items`` may also be given as a mapping of item name to 0/1 flag.
Cohort files carry the same fields plus ``label``, ``evidence``, ``promoted``
and ``y``.
"""

import json
import logging
from typing import Any, Iterable, Mapping, Optional

import pandas as pd

from fallrisk.preconditions import InvalidInputError, check_input
from fallrisk.types import Dict, List
from fallrisk.utils import PathType, atomic_write

from .classes import (
    AssessmentRecord,
    Cohort,
    Demographics,
    Encounter,
    LabeledEncounter,
    RiskLabel,
    WindowRun,
    check_encounter,
)

logger = logging.getLogger(__name__)

__all__ = [
    "encounter_from_dict",
    "encounter_to_dict",
    "read_cohort",
    "read_encounters",
    "write_cohort",
    "write_encounters",
    "write_exclusion_tally",
]


def _items(value: Any) -> frozenset:
    if isinstance(value, Mapping):
        return frozenset(str(name) for name, flag in value.items() if int(flag))
    return frozenset(str(name) for name in value)


def _optional_int(value: Any) -> Optional[int]:
    return None if value is None else int(value)


def _optional_float(value: Any) -> Optional[float]:
    return None if value is None else float(value)


def encounter_from_dict(
    record: Mapping[str, Any], allow_truncated: bool = False
) -> Encounter:
    """
    Builds and validates an :class:`Encounter` from its JSON object.

    Raises
    ------
    InvalidInputError
        If a field is missing, has the wrong shape, or the encounter violates
        one of its invariants.
    """
    try:
        demographics = record["demographics"]
        encounter = Encounter(
            id=str(record["id"]),
            hospital=str(record.get("hospital", "")),
            admit_length_days=int(record["admit_length_days"]),
            daily_targeted=tuple(int(count) for count in record["daily_targeted"]),
            daily_nontargeted=tuple(
                frozenset(str(kind) for kind in kinds)
                for kinds in record["daily_nontargeted"]
            ),
            assessments=tuple(
                AssessmentRecord(
                    day=int(item["day"]),
                    jhfrat_items=_items(item["jhfrat_items"]),
                    jhhlm=_optional_int(item.get("jhhlm")),
                    ampac=_optional_float(item.get("ampac")),
                )
                for item in record["assessments"]
            ),
            demographics=Demographics(
                age_years=int(demographics["age_years"]),
                sex=str(demographics["sex"]),
                race=str(demographics["race"]),
                service=str(demographics["service"]),
                comorbidity_count=int(demographics["comorbidity_count"]),
            ),
            fall_day=_optional_int(record.get("fall_day")),
        )
    except (KeyError, TypeError, ValueError) as error:
        eid = record.get("id", "<unknown>") if isinstance(record, Mapping) else "?"
        raise InvalidInputError(
            f"encounter {eid}: malformed record ({type(error).__name__}: {error})"
        ) from error
    check_encounter(encounter, allow_truncated=allow_truncated)
    return encounter


def encounter_to_dict(encounter: Encounter) -> Dict[str, Any]:
    return {
        "id": encounter.id,
        "hospital": encounter.hospital,
        "admit_length_days": encounter.admit_length_days,
        "daily_targeted": [int(count) for count in encounter.daily_targeted],
        "daily_nontargeted": [sorted(kinds) for kinds in encounter.daily_nontargeted],
        "assessments": [
            {
                "day": record.day,
                "jhfrat_items": sorted(record.jhfrat_items),
                "jhhlm": record.jhhlm,
                "ampac": record.ampac,
            }
            for record in encounter.assessments
        ],
        "demographics": encounter.demographics._asdict(),
        "fall_day": encounter.fall_day,
    }


def _read_lines(path: PathType) -> List[Dict[str, Any]]:
    records: List[Dict[str, Any]] = []
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as error:
                raise InvalidInputError(
                    f"{path}:{number}: not valid JSON ({error.msg})"
                ) from error
    return records


def read_encounters(path: PathType, allow_truncated: bool = False) -> List[Encounter]:
    """
    Reads and validates a JSON Lines file of encounters.

    Parameters
    ----------
    path : str or PathLike
        Input file
    allow_truncated : bool (default=False)
        Accept encounters already cut at their first fall

    Returns
    -------
    encounters : List[Encounter]

    Raises
    ------
    InvalidInputError
        If the file holds no encounters, a line is not JSON, a record is
        malformed, or two encounters share an id.
    """
    encounters = [
        encounter_from_dict(record, allow_truncated) for record in _read_lines(path)
    ]
    check_input(len(encounters) > 0, f"{path}: no encounters found")
    ids = [encounter.id for encounter in encounters]
    check_input(len(set(ids)) == len(ids), f"{path}: duplicate encounter ids")
    logger.info(f"Read {len(encounters)} encounters from {path}")
    return encounters


def write_encounters(path: PathType, encounters: Iterable[Encounter]) -> None:
    with atomic_write(path) as handle:
        for encounter in encounters:
            handle.write(json.dumps(encounter_to_dict(encounter), sort_keys=True))
            handle.write("\n")


def write_cohort(path: PathType, cohort: Cohort) -> None:
    """
    Writes every labeled encounter of ``cohort`` as one JSON line, including
    its rule label, the supporting window runs, whether it was promoted by fall
    matching and its binary label ``y`` (null for Indeterminate encounters).
    """
    with atomic_write(path) as handle:
        for record in cohort.records:
            line = encounter_to_dict(record.encounter)
            line["label"] = record.label.label
            line["evidence"] = [run._asdict() for run in record.label.evidence]
            line["promoted"] = record.promoted
            line["y"] = record.y
            handle.write(json.dumps(line, sort_keys=True))
            handle.write("\n")


def read_cohort(path: PathType) -> Cohort:
    """
    Reads a labeled cohort written by :func:`write_cohort`.

    The exclusion tally is not part of the cohort file and comes back empty;
    label counts are recomputed from the rule labels.
    """
    records: List[LabeledEncounter] = []
    for line in _read_lines(path):
        encounter = encounter_from_dict(line, allow_truncated=True)
        label = line.get("label")
        check_input(
            label in ("Low", "High", "Indeterminate"),
            f"encounter {encounter.id}: unknown label {label!r}",
        )
        try:
            evidence = tuple(WindowRun(**run) for run in line.get("evidence", ()))
        except TypeError as error:
            raise InvalidInputError(
                f"encounter {encounter.id}: malformed evidence"
            ) from error
        records.append(
            LabeledEncounter(
                encounter, RiskLabel(label, evidence), bool(line.get("promoted"))
            )
        )
    check_input(len(records) > 0, f"{path}: no labeled encounters found")
    label_counts = {"Low": 0, "High": 0, "Indeterminate": 0}
    for record in records:
        label_counts[record.label.label] += 1
    return Cohort(tuple(records), {}, label_counts)


def write_exclusion_tally(path: PathType, tally: Mapping[str, int]) -> None:
    frame = pd.DataFrame(
        {"reason": list(tally.keys()), "count": [int(v) for v in tally.values()]}
    )
    with atomic_write(path) as handle:
        frame.to_csv(handle, index=False)
