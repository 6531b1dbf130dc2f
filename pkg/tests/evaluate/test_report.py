# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import json
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pandas as pd

from fallrisk.evaluate import (
    AUGMENTED,
    BASELINE,
    OPTIMIZED,
    evaluate_cohort,
    intervention_correlation,
    intervention_frame,
    report_summary,
    write_report,
)
from tests.utils import make_encounter, synthetic_cohort


class TestInterventionCorrelation(unittest.TestCase):
    def test_frame(self):
        encounters = [
            make_encounter("a", targeted=(0, 0, 0), items=()),
            make_encounter("b", targeted=(2, 4, 6), items=("fall_history",)),
        ]
        frame = intervention_frame(encounters)
        self.assertEqual(frame["mean_jhfrat_score"].tolist(), [0.0, 5.0])
        self.assertEqual(frame["mean_daily_targeted"].tolist(), [0.0, 4.0])

    def test_monotone(self):
        encounters = [
            make_encounter(f"e{i}", targeted=(i, i, i), items=items)
            for i, items in enumerate(
                [(), ("age_60_69",), ("age_70_79",), ("fall_history",)]
            )
        ]
        self.assertAlmostEqual(intervention_correlation(encounters), 1.0)

    def test_too_few(self):
        with self.assertRaises(ValueError):
            intervention_correlation([make_encounter()])


class TestEvaluateCohort(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.cohort = synthetic_cohort()
        cls.report = evaluate_cohort(cls.cohort, k=3, seed=0)

    def test_unknown_scores(self):
        unknown = self.report.unknown_scores
        self.assertEqual(len(unknown), len(self.cohort.unknown()))
        for name in (BASELINE, OPTIMIZED, AUGMENTED):
            self.assertIn(f"score_{name}", unknown.columns)

    def test_confusion(self):
        confusion = self.report.confusion
        self.assertEqual(len(confusion), 3 * 2)
        self.assertEqual(
            sorted(confusion["threshold"].unique().tolist()), [6.0, 13.0]
        )

    def test_concordance_covers_cohort(self):
        concordance = self.report.concordance
        for _, block in concordance.groupby("model"):
            self.assertEqual(block["count"].sum(), len(self.cohort.records))

    def test_differentials(self):
        self.assertEqual(sorted(self.report.differentials), [AUGMENTED, OPTIMIZED])
        n = len(self.report.cv.oof_scores)
        for differential in self.report.differentials.values():
            self.assertEqual(differential.deltas.shape, (n,))
            self.assertLessEqual(
                differential.share_within_2, differential.share_within_5
            )

    def test_transitions(self):
        transitions = self.report.transitions
        self.assertEqual(
            list(transitions.columns),
            ["model", "y", "baseline_category", "model_category", "count", "percent"],
        )
        self.assertEqual(
            sorted(transitions["model"].unique()), sorted([AUGMENTED, OPTIMIZED])
        )
        for _, block in transitions.groupby("model"):
            self.assertEqual(block["count"].sum(), len(self.report.cv.oof_scores))

    def test_summary(self):
        summary = report_summary(self.report)
        self.assertEqual(
            set(summary["models"]), {BASELINE, OPTIMIZED, AUGMENTED}
        )
        self.assertEqual(summary["label_counts"], self.cohort.label_counts)
        self.assertEqual(
            summary["n_labeled"] + summary["n_unknown"], len(self.cohort.records)
        )
        augmented = summary["models"][AUGMENTED]
        self.assertEqual(len(augmented["coefficients"]), 40)
        self.assertEqual(set(augmented["confusion"]), {"low", "high"})
        self.assertNotIn("coefficients", summary["models"][BASELINE])

    def test_parallel_folds_identical(self):
        parallel = evaluate_cohort(self.cohort, k=3, seed=0, workers=2)
        np.testing.assert_array_equal(parallel.cv.folds, self.report.cv.folds)
        pd.testing.assert_frame_equal(
            parallel.cv.summary, self.report.cv.summary, rtol=1e-6
        )

    def test_write(self):
        with tempfile.TemporaryDirectory() as directory:
            paths = write_report(directory, self.report)
            names = sorted(path.name for path in paths)
            self.assertIn("summary.json", names)
            self.assertEqual(len(names), 11)
            for path in paths:
                self.assertTrue(path.exists())
            summary = json.loads(Path(directory, "summary.json").read_text())
            self.assertEqual(summary["n_promoted"], self.cohort.n_promoted)
            oof = pd.read_csv(
                Path(directory, "oof_scores.csv"), float_precision="round_trip"
            )
            np.testing.assert_allclose(
                oof[f"score_{BASELINE}"],
                self.report.cv.oof_scores[f"score_{BASELINE}"],
                rtol=1e-9,
            )


if __name__ == "__main__":
    unittest.main()
