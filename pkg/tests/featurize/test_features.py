# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import unittest

import numpy as np
from numpy.testing import assert_array_equal

from fallrisk.cohort import AssessmentRecord, apply_exclusions, build_cohort
from fallrisk.featurize import (
    EHR_GROUPS,
    average_jhfrat,
    baseline_jhfrat_score,
    bin_ehr,
    build_dictionary,
    build_matrix,
    encounter_matrix,
    jhfrat_only,
    occurrence_rates,
)
from fallrisk.jhfrat import JHFRAT_ITEM_NAMES
from fallrisk.preconditions import EmptyCohortError, InvalidInputError
from tests.utils import make_encounter


def _ehr(encounter, group):
    dictionary = build_dictionary()
    names = [name for g, members in EHR_GROUPS if g == group for name in members]
    values = dict(zip(dictionary.names[18:], bin_ehr(encounter)))
    return {name: int(values[name]) for name in names}


class TestAverageJhfrat(unittest.TestCase):
    def test_always_flagged(self):
        averages = average_jhfrat(make_encounter(items=("impulsive",)))
        self.assertEqual(averages[JHFRAT_ITEM_NAMES.index("impulsive")], 1.0)
        self.assertEqual(averages.sum(), 1.0)

    def test_half_the_assessments(self):
        encounter = make_encounter(targeted=[0] * 4)
        records = list(encounter.assessments)
        for i in (0, 2):
            records[i] = records[i]._replace(jhfrat_items=frozenset({"fall_history"}))
        averages = average_jhfrat(encounter._replace(assessments=tuple(records)))
        self.assertEqual(averages[JHFRAT_ITEM_NAMES.index("fall_history")], 0.5)

    def test_truncated_fall_encounter(self):
        # five assessments, the last two on or after the fall day
        assessments = tuple(
            AssessmentRecord(day, frozenset({"unsteady_gait"} if day <= 2 else ()))
            for day in (1, 2, 3, 4, 5)
        )
        encounter = make_encounter(targeted=[0] * 5, fall_day=4)._replace(
            assessments=assessments
        )
        (kept,), _ = apply_exclusions([encounter])
        averages = average_jhfrat(kept)
        self.assertAlmostEqual(
            averages[JHFRAT_ITEM_NAMES.index("unsteady_gait")], 2 / 3
        )

    def test_no_assessments(self):
        with self.assertRaises(InvalidInputError):
            average_jhfrat(make_encounter()._replace(assessments=()))


class TestBinEhr(unittest.TestCase):
    def test_ampac_closed_right_edge(self):
        self.assertEqual(
            _ehr(make_encounter(ampac=25.0), "AMPAC"),
            {"ampac_le_25": 1, "ampac_25_35": 0, "ampac_35_45": 0, "ampac_gt_45": 0},
        )
        self.assertEqual(_ehr(make_encounter(ampac=45.5), "AMPAC")["ampac_gt_45"], 1)

    def test_missing_measures_leave_zeros(self):
        encounter = make_encounter()
        self.assertEqual(sum(_ehr(encounter, "AMPAC").values()), 0)
        self.assertEqual(sum(_ehr(encounter, "JHHLM").values()), 0)

    def test_jhhlm_rounds_half_up(self):
        encounter = make_encounter(targeted=[0] * 4, jhhlm=3)
        records = list(encounter.assessments)
        records[0] = records[0]._replace(jhhlm=4)
        records[1] = records[1]._replace(jhhlm=4)
        # mean 3.5 rounds to 4
        encounter = encounter._replace(assessments=tuple(records))
        self.assertEqual(_ehr(encounter, "JHHLM")["jhhlm_4_5"], 1)

    def test_comorbidity_edges(self):
        for count, column in (
            (4, "comorbidities_lt_5"),
            (5, "comorbidities_5_10"),
            (10, "comorbidities_5_10"),
            (11, "comorbidities_gt_10"),
        ):
            bins = _ehr(make_encounter(comorbidity_count=count), "Comorbidities")
            self.assertEqual(bins[column], 1)
            self.assertEqual(sum(bins.values()), 1)

    def test_service_one_hot(self):
        bins = _ehr(make_encounter(service="neurosurgery"), "Service")
        self.assertEqual(bins["service_neurosurgery"], 1)
        self.assertEqual(sum(bins.values()), 1)

    def test_invalid_values(self):
        with self.assertRaises(InvalidInputError):
            bin_ehr(make_encounter(jhhlm=9))
        with self.assertRaises(InvalidInputError):
            bin_ehr(make_encounter(ampac=-1.0))
        with self.assertRaises(InvalidInputError):
            bin_ehr(make_encounter(service="dermatology"))


class TestBuildMatrix(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        age = ("age_80_plus",)
        cls.cohort = build_cohort(
            [
                make_encounter("a", targeted=[0] * 4, items=age, ampac=30.0),
                make_encounter("b", targeted=[0] * 4, items=age, ampac=30.0),
                make_encounter("c", targeted=[4] * 4, items=("sedated_procedure",)),
                make_encounter("d", targeted=[1] * 4),
            ]
        )

    def test_shapes(self):
        self.assertEqual(build_matrix(self.cohort, augmented=False).X.shape, (3, 18))
        matrix = build_matrix(self.cohort)
        self.assertEqual(matrix.X.shape, (3, 40))
        assert_array_equal(matrix.y, [0, 0, 1])
        self.assertEqual(matrix.ids, ("a", "b", "c"))

    def test_identical_encounters_identical_rows(self):
        X = build_matrix(self.cohort).X
        assert_array_equal(X[0], X[1])

    def test_groups_exclusive(self):
        matrix = build_matrix(self.cohort)
        for members in matrix.dictionary.groups().values():
            columns = [matrix.dictionary.position(name) for name in members]
            sums = matrix.X[:, columns].sum(axis=1)
            self.assertTrue(np.all(np.isin(sums, (0.0, 1.0))))

    def test_unknown_rows(self):
        unknown = build_matrix(self.cohort, include_unknown=True)
        self.assertEqual(unknown.ids, ("d",))
        self.assertFalse(unknown.labeled)

    def test_encounter_matrix_matches_build_matrix(self):
        matrix = build_matrix(self.cohort)
        encounters = [record.encounter for record in self.cohort.binary()]
        assert_array_equal(encounter_matrix(encounters, matrix.dictionary), matrix.X)
        self.assertEqual(encounter_matrix([], matrix.dictionary).shape, (0, 40))

    def test_jhfrat_only(self):
        matrix = jhfrat_only(build_matrix(self.cohort))
        assert_array_equal(matrix.X, build_matrix(self.cohort, augmented=False).X)
        self.assertFalse(matrix.dictionary.augmented)

    def test_occurrence_rates(self):
        rates = occurrence_rates(build_matrix(self.cohort, augmented=False))
        self.assertAlmostEqual(rates["age_80_plus"], 2 / 3)
        self.assertAlmostEqual(rates["sedated_procedure"], 1 / 3)

    def test_empty_cohort(self):
        cohort = self.cohort._replace(records=self.cohort.unknown())
        with self.assertRaises(EmptyCohortError):
            build_matrix(cohort)


class TestBaselineScore(unittest.TestCase):
    def test_zero_row(self):
        self.assertEqual(float(baseline_jhfrat_score(np.zeros(18))), 0.0)

    def test_fall_history(self):
        row = np.zeros(40)
        row[JHFRAT_ITEM_NAMES.index("fall_history")] = 1.0
        self.assertEqual(float(baseline_jhfrat_score(row)), 5.0)

    def test_all_items_sum_to_49(self):
        self.assertEqual(float(baseline_jhfrat_score(np.ones(18))), 49.0)

    def test_matrix(self):
        scores = baseline_jhfrat_score(np.eye(18))
        self.assertEqual(scores.shape, (18,))


if __name__ == "__main__":
    unittest.main()
