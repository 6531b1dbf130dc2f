# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import unittest

import numpy as np

from fallrisk.evaluate import lambda_sweep, sensitivity_sweep, share_ranges
from fallrisk.featurize import build_matrix
from fallrisk.jhfrat import JHFRAT_ITEM_NAMES
from tests.utils import synthetic_cohort, synthetic_encounters


class TestSensitivitySweep(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.result = sensitivity_sweep(
            synthetic_encounters(), thresholds=(4, 6, 8), augmented=False
        )

    def test_counts(self):
        counts = self.result.counts
        self.assertEqual(list(counts.index), [4, 6, 8])
        self.assertTrue(np.all(np.diff(counts["high"].to_numpy()) <= 0))
        self.assertTrue(np.all(np.diff(counts["low"].to_numpy()) >= 0))
        totals = counts[["low", "high", "indeterminate"]].sum(axis=1)
        self.assertEqual(totals.nunique(), 1)

    def test_default_threshold_matches_cohort(self):
        cohort = synthetic_cohort()
        row = self.result.counts.loc[6]
        self.assertEqual(row["high"], cohort.label_counts["High"])
        self.assertEqual(row["low"], cohort.label_counts["Low"])
        self.assertEqual(row["promoted"], cohort.n_promoted)

    def test_stability(self):
        self.assertEqual(list(self.result.coefficients.index), [4, 6, 8])
        self.assertEqual(list(self.result.stability.index), list(JHFRAT_ITEM_NAMES))
        stability = self.result.stability
        self.assertTrue(np.all(stability["range"] >= 0))

    def test_share_ranges(self):
        shares = share_ranges(self.result)
        self.assertEqual(list(shares.columns), [4, 6, 8])
        np.testing.assert_allclose(shares.sum(axis=0), 1.0)

    def test_empty(self):
        with self.assertRaises(ValueError):
            sensitivity_sweep(synthetic_encounters(), thresholds=())


class TestLambdaSweep(unittest.TestCase):
    def test_rows(self):
        matrix = build_matrix(synthetic_cohort(), augmented=False)
        sweep = lambda_sweep(matrix, lambdas=(0.0, 0.5, 1.0))
        self.assertEqual(list(sweep.index), [0.0, 0.5, 1.0])
        for name in JHFRAT_ITEM_NAMES:
            self.assertIn(name, sweep.columns)
        self.assertTrue((sweep["auc_roc"] > 0.5).all())

    def test_invalid_lambda(self):
        matrix = build_matrix(synthetic_cohort(), augmented=False)
        with self.assertRaises(ValueError):
            lambda_sweep(matrix, lambdas=(1.5,))


if __name__ == "__main__":
    unittest.main()
