# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import tempfile
import unittest
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from fallrisk.plot import (
    differential_plot,
    pr_plot,
    roc_plot,
    save_svg,
    score_distribution_plot,
)


def _oof(n=120, seed=0):
    rng = np.random.default_rng(seed)
    y = (rng.random(n) < 0.4).astype(int)
    y[:2] = (0, 1)
    return pd.DataFrame(
        {
            "id": [f"e{i}" for i in range(n)],
            "y": y,
            "fold": np.arange(n) % 3,
            "score_jhfrat": rng.integers(0, 20, size=n) + 3 * y,
            "score_optimized": rng.normal(size=n) + 2 * y,
        }
    )


class TestPlot(unittest.TestCase):
    def tearDown(self):
        plt.close("all")

    def test_curves(self):
        oof = _oof()
        models = ["jhfrat", "optimized"]
        for plot in (roc_plot, pr_plot):
            ax = plot(oof, models)
            labels = [text.get_text() for text in ax.get_legend().get_texts()]
            self.assertEqual(len(labels), 2)
            self.assertTrue(labels[0].startswith("JHFRAT ("))

    def test_without_folds(self):
        ax = roc_plot(_oof().drop(columns="fold"), ["optimized"])
        label = ax.get_legend().get_texts()[0].get_text()
        self.assertNotIn("±", label)

    def test_missing_model(self):
        with self.assertRaises(ValueError):
            roc_plot(_oof(), ["augmented"])
        with self.assertRaises(ValueError):
            score_distribution_plot(_oof().drop(columns="y"), ["jhfrat"])

    def test_distribution_panels(self):
        fig = score_distribution_plot(_oof(), ["jhfrat", "optimized"])
        self.assertEqual(len(fig.axes), 2)

    def test_differential(self):
        ax = differential_plot(np.random.default_rng(1).normal(size=200))
        self.assertEqual(len(ax.lines), 4)
        with self.assertRaises(ValueError):
            differential_plot(np.array([]))

    def test_svg_reproducible(self):
        with tempfile.TemporaryDirectory() as directory:
            contents = []
            for name in ("a.svg", "b.svg"):
                path = Path(directory) / name
                save_svg(roc_plot(_oof(), ["jhfrat"]).get_figure(), path)
                contents.append(path.read_bytes())
        self.assertEqual(contents[0], contents[1])
        self.assertTrue(contents[0].lstrip().startswith(b"<?xml"))


if __name__ == "__main__":
    unittest.main()
