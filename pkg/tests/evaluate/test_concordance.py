# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import unittest

import numpy as np
import pandas as pd

from fallrisk.evaluate import (
    RISK_LABELS,
    STRATA,
    coefficient_shares,
    concordance_table,
    risk_label_names,
    stability_stats,
)
from fallrisk.featurize import UNLABELED
from fallrisk.scoring import CATEGORIES


class TestRiskLabelNames(unittest.TestCase):
    def test_names(self):
        names = risk_label_names(np.array([0, 1, UNLABELED]))
        self.assertEqual(names.tolist(), ["Low", "High", "Unknown"])


class TestConcordanceTable(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(0)
        n = 500
        self.categories = rng.choice(CATEGORIES, size=n)
        self.labels = rng.choice(RISK_LABELS, size=n)
        self.falls = rng.random(n) < 0.1
        self.table = concordance_table(self.categories, self.labels, self.falls)

    def test_every_cell_present(self):
        self.assertEqual(len(self.table), len(STRATA) * 3 * 3)

    def test_totals(self):
        for stratum, fall in zip(STRATA, (False, True)):
            block = self.table[self.table["stratum"] == stratum]
            self.assertEqual(block["count"].sum(), int(np.sum(self.falls == fall)))
            for label in RISK_LABELS:
                expected = int(np.sum((self.falls == fall) & (self.labels == label)))
                rows = block[block["risk_label"] == label]
                self.assertEqual(rows["count"].sum(), expected)
                if expected:
                    self.assertAlmostEqual(rows["percent"].sum(), 100.0)

    def test_empty_stratum(self):
        table = concordance_table(["Low", "High"], ["Low", "High"], [False, False])
        falls = table[table["stratum"] == "fall"]
        self.assertEqual(falls["count"].sum(), 0)
        self.assertEqual(falls["percent"].sum(), 0.0)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            concordance_table(["Severe"], ["Low"], [False])
        with self.assertRaises(ValueError):
            concordance_table(["Low"], ["Indeterminate"], [False])


class TestStability(unittest.TestCase):
    def test_shares(self):
        shares = coefficient_shares(np.array([1.0, 1.0, 2.0]), ["a", "b", "c"])
        self.assertAlmostEqual(shares.sum(), 1.0)
        self.assertEqual(shares["c"], 0.5)

    def test_subset(self):
        shares = coefficient_shares(
            np.array([1.0, 3.0, 100.0]), ["a", "b", "c"], subset=["a", "b"]
        )
        self.assertEqual(shares.tolist(), [0.25, 0.75])

    def test_zero_sum(self):
        shares = coefficient_shares(np.zeros(2), ["a", "b"])
        self.assertEqual(shares.tolist(), [0.0, 0.0])

    def test_stats(self):
        coefficients = pd.DataFrame(
            [[1.0, 1.0], [1.0, 3.0], [2.0, 2.0]], columns=["a", "b"]
        )
        stats = stability_stats(coefficients)
        self.assertEqual(list(stats.columns), ["min", "max", "range", "sd"])
        np.testing.assert_allclose(stats["min"], [0.25, 0.5])
        np.testing.assert_allclose(stats["max"], [0.5, 0.75])
        np.testing.assert_allclose(stats["range"], stats["max"] - stats["min"])

    def test_identical_fits(self):
        coefficients = pd.DataFrame([[1.0, 2.0]] * 4, columns=["a", "b"])
        stats = stability_stats(coefficients)
        np.testing.assert_allclose(stats["sd"], 0.0, atol=1e-15)
        np.testing.assert_allclose(stats["range"], 0.0, atol=1e-15)

    def test_empty(self):
        with self.assertRaises(ValueError):
            stability_stats(pd.DataFrame(columns=["a"]))


if __name__ == "__main__":
    unittest.main()
