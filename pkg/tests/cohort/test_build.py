# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import unittest

from fallrisk.cohort import LabelingPolicy, build_cohort
from fallrisk.preconditions import EmptyCohortError
from tests.utils import make_encounter


def _encounters():
    return [
        make_encounter("low1", targeted=[0, 0, 0, 0]),
        make_encounter("low2", targeted=[0, 1, 0, 0, 0]),
        make_encounter("high1", targeted=[3, 3, 3, 3]),
        # High until its fall on day 6
        make_encounter("fall1", targeted=[6, 6, 6, 6, 6, 9, 9], fall_day=6),
        # a quiet and a busy half; its busy half mirrors the pre-fall days
        make_encounter("mixed", targeted=[0, 0, 0, 6, 6, 6]),
        make_encounter("middle", targeted=[1, 1, 1, 1, 1, 1]),
        make_encounter("short", targeted=[0]),
    ]


class TestBuildCohort(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.cohort = build_cohort(_encounters())

    def test_label_counts(self):
        self.assertEqual(
            self.cohort.label_counts, {"Low": 2, "High": 2, "Indeterminate": 2}
        )

    def test_exclusions(self):
        self.assertEqual(self.cohort.exclusion_tally["too_short"], 1)
        self.assertEqual(len(self.cohort.records), 6)

    def test_promotion(self):
        by_id = {r.encounter.id: r for r in self.cohort.records}
        self.assertTrue(by_id["mixed"].promoted)
        self.assertEqual(by_id["mixed"].label.label, "Indeterminate")
        self.assertEqual(by_id["mixed"].y, 1)
        self.assertIsNone(by_id["middle"].y)
        self.assertEqual(self.cohort.n_promoted, 1)
        self.assertEqual(self.cohort.matches[0].matched_ids, ("mixed",))

    def test_binary_labels(self):
        y = {r.encounter.id: r.y for r in self.cohort.binary()}
        self.assertEqual(
            y, {"low1": 0, "low2": 0, "high1": 1, "fall1": 1, "mixed": 1}
        )
        self.assertEqual([r.encounter.id for r in self.cohort.unknown()], ["middle"])

    def test_fall_encounter_truncated(self):
        by_id = {r.encounter.id: r for r in self.cohort.records}
        self.assertEqual(by_id["fall1"].encounter.daily_targeted, (6,) * 5)

    def test_all_zero_cohort_is_low(self):
        cohort = build_cohort(
            [make_encounter(f"e{i}", targeted=[0] * (i + 2)) for i in range(5)]
        )
        self.assertEqual(cohort.label_counts["Low"], 5)
        self.assertTrue(all(r.y == 0 for r in cohort.records))

    def test_empty_cohort(self):
        with self.assertRaises(EmptyCohortError):
            build_cohort([make_encounter(targeted=[1] * 6)])
        with self.assertRaises(EmptyCohortError):
            build_cohort([])

    def test_higher_threshold_fewer_high(self):
        strict = build_cohort(_encounters(), LabelingPolicy(high_min_per_window=10))
        self.assertLessEqual(
            strict.label_counts["High"], self.cohort.label_counts["High"]
        )

    def test_deterministic(self):
        self.assertEqual(build_cohort(_encounters()), self.cohort)


if __name__ == "__main__":
    unittest.main()
