# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import json
import os
import tempfile
import unittest

import pandas as pd

from fallrisk.cohort import (
    build_cohort,
    encounter_from_dict,
    encounter_to_dict,
    read_cohort,
    read_encounters,
    write_cohort,
    write_encounters,
    write_exclusion_tally,
)
from fallrisk.preconditions import InvalidInputError
from tests.utils import make_encounter


class TestEncounterIO(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "encounters.jsonl")

    def tearDown(self):
        self.tmp.cleanup()

    def _write_lines(self, lines):
        with open(self.path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines))

    def test_written_file_reads_back(self):
        encounters = [
            make_encounter(
                "a",
                targeted=[0, 1, 2],
                nontargeted=[{"low_bed"}, set(), {"wristband", "low_bed"}],
                items=("age_70_79", "incontinence"),
                jhhlm=5,
                ampac=33.5,
            ),
            make_encounter("b", targeted=[4, 4, 4, 4], fall_day=3),
        ]
        write_encounters(self.path, encounters)
        self.assertEqual(read_encounters(self.path), encounters)

    def test_items_as_mapping(self):
        record = encounter_to_dict(make_encounter(items=("impulsive",)))
        for assessment in record["assessments"]:
            assessment["jhfrat_items"] = {"impulsive": 1, "fall_history": 0}
        encounter = encounter_from_dict(record)
        self.assertEqual(
            encounter.assessments[0].jhfrat_items, frozenset({"impulsive"})
        )

    def test_empty_file(self):
        self._write_lines([])
        with self.assertRaises(InvalidInputError):
            read_encounters(self.path)

    def test_not_json(self):
        self._write_lines(["{not json"])
        with self.assertRaises(InvalidInputError):
            read_encounters(self.path)

    def test_missing_field(self):
        record = encounter_to_dict(make_encounter())
        del record["daily_targeted"]
        self._write_lines([json.dumps(record)])
        with self.assertRaises(InvalidInputError):
            read_encounters(self.path)

    def test_length_mismatch(self):
        record = encounter_to_dict(make_encounter())
        record["admit_length_days"] = 7
        with self.assertRaises(InvalidInputError):
            encounter_from_dict(record)

    def test_two_age_levels(self):
        record = encounter_to_dict(make_encounter(items=("age_60_69", "age_80_plus")))
        with self.assertRaises(InvalidInputError):
            encounter_from_dict(record)

    def test_unknown_item(self):
        record = encounter_to_dict(make_encounter(items=("left_handed",)))
        with self.assertRaises(InvalidInputError):
            encounter_from_dict(record)

    def test_duplicate_ids(self):
        line = json.dumps(encounter_to_dict(make_encounter("dup")))
        self._write_lines([line, line])
        with self.assertRaises(InvalidInputError):
            read_encounters(self.path)

    def test_missing_file(self):
        with self.assertRaises(OSError):
            read_encounters(os.path.join(self.tmp.name, "absent.jsonl"))


class TestCohortIO(unittest.TestCase):
    def test_cohort_reads_back(self):
        cohort = build_cohort(
            [
                make_encounter("low", targeted=[0, 0, 0, 0]),
                make_encounter("high", targeted=[7, 7, 7, 7, 9], fall_day=5),
                make_encounter("mid", targeted=[1, 1, 1, 1]),
            ]
        )
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cohort.jsonl")
            write_cohort(path, cohort)
            loaded = read_cohort(path)
            tally_path = os.path.join(tmp, "exclusions.csv")
            write_exclusion_tally(tally_path, cohort.exclusion_tally)
            tally = pd.read_csv(tally_path)
        self.assertEqual(loaded.records, cohort.records)
        self.assertEqual(loaded.label_counts, cohort.label_counts)
        self.assertEqual(list(tally.columns), ["reason", "count"])
        self.assertEqual(int(tally["count"].sum()), 0)

    def test_unknown_label(self):
        record = encounter_to_dict(make_encounter())
        record["label"] = "Medium"
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "cohort.jsonl")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(json.dumps(record) + "\n")
            with self.assertRaises(InvalidInputError):
                read_cohort(path)


if __name__ == "__main__":
    unittest.main()
