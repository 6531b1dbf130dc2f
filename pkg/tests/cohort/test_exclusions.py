# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import unittest

from fallrisk.cohort import EXCLUSION_REASONS, apply_exclusions, truncate_at_fall
from tests.utils import make_encounter


class TestApplyExclusions(unittest.TestCase):
    def test_too_short(self):
        kept, tally = apply_exclusions([make_encounter(targeted=[0])])
        self.assertEqual(kept, [])
        self.assertEqual(tally["too_short"], 1)

    def test_boundary_lengths_kept(self):
        two = make_encounter("e2", targeted=[0, 0])
        longest = make_encounter("e21", targeted=[0] * 21, n_assessments=3)
        kept, tally = apply_exclusions([two, longest])
        self.assertEqual(kept, [two, longest])
        self.assertEqual(sum(tally.values()), 0)

    def test_too_long(self):
        _, tally = apply_exclusions([make_encounter(targeted=[0] * 22)])
        self.assertEqual(tally["too_long"], 1)

    def test_too_few_assessments(self):
        _, tally = apply_exclusions([make_encounter(targeted=[0] * 5, n_assessments=2)])
        self.assertEqual(tally["too_few_assessments"], 1)

    def test_early_fall(self):
        _, tally = apply_exclusions([make_encounter(targeted=[0] * 5, fall_day=2)])
        self.assertEqual(tally["early_fall"], 1)

    def test_fall_checked_before_length(self):
        encounter = make_encounter(targeted=[0] * 25, fall_day=22)
        _, tally = apply_exclusions([encounter])
        self.assertEqual(tally["late_fall"], 1)
        self.assertEqual(tally["too_long"], 0)

    def test_long_stay_with_fall_kept_after_truncation(self):
        encounter = make_encounter(targeted=[1] * 25, fall_day=10)
        kept, _ = apply_exclusions([encounter])
        self.assertEqual(len(kept), 1)
        self.assertEqual(kept[0].admit_length_days, 9)
        self.assertEqual(kept[0].fall_day, 10)

    def test_truncation_can_leave_too_few_assessments(self):
        encounter = make_encounter(targeted=[0] * 6, fall_day=3)
        _, tally = apply_exclusions([encounter])
        self.assertEqual(tally["too_few_assessments"], 1)

    def test_every_reason_tallied(self):
        _, tally = apply_exclusions([])
        self.assertEqual(tuple(tally), EXCLUSION_REASONS)
        self.assertTrue(all(count == 0 for count in tally.values()))


class TestTruncateAtFall(unittest.TestCase):
    def test_no_fall_unchanged(self):
        encounter = make_encounter(targeted=[0, 1, 2])
        self.assertIs(truncate_at_fall(encounter), encounter)

    def test_keeps_days_before_fall(self):
        encounter = make_encounter(
            targeted=[1, 2, 3, 4, 5],
            nontargeted=[{"a"}, {"b"}, {"c"}, {"d"}, {"e"}],
            fall_day=4,
        )
        truncated = truncate_at_fall(encounter)
        self.assertEqual(truncated.daily_targeted, (1, 2, 3))
        self.assertEqual(
            truncated.daily_nontargeted,
            (frozenset({"a"}), frozenset({"b"}), frozenset({"c"})),
        )
        self.assertTrue(all(a.day < 4 for a in truncated.assessments))
        self.assertTrue(truncated.truncated)


if __name__ == "__main__":
    unittest.main()
