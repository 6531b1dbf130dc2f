# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import contextlib
import hashlib
import io
import json
import tempfile
import unittest
from pathlib import Path

import pandas as pd

from fallrisk.cli import (
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    MANIFEST,
    REPORT_TABLES,
    main,
)
from fallrisk.solver import ScoreModel
from fallrisk.utils import config_hash


def _run(*argv):
    stderr = io.StringIO()
    with contextlib.redirect_stderr(stderr):
        code = main([str(a) for a in argv])
    return code, stderr.getvalue()


class TestPipeline(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.directory = tempfile.TemporaryDirectory()
        cls.root = Path(cls.directory.name) / "run"
        cls.code, cls.stderr = _run(
            "run",
            "--out-dir", cls.root,
            "--n-encounters", 1200,
            "--seed", 4,
            "--folds", 3,
            "--thresholds", 5, 6, 7,
            "--lambdas", 0.25, 0.75,
        )  # fmt: skip

    @classmethod
    def tearDownClass(cls):
        cls.directory.cleanup()

    def test_exit_code(self):
        self.assertEqual(self.code, EXIT_OK, self.stderr)

    def test_step_outputs(self):
        expected = {
            "synth": ["encounters.jsonl", "truth.csv"],
            "label": ["cohort.jsonl", "exclusions.csv", "label_counts.json"],
            "features": [
                "features.csv",
                "features.dictionary.json",
                "unknown_features.csv",
                "unknown_features.dictionary.json",
            ],
            "fit": ["model.json", "scores.csv"],
            "eval": list(REPORT_TABLES),
            "sweep": [
                "sweep_counts.csv",
                "sweep_coefficients.csv",
                "sweep_stability.csv",
                "sweep_shares.csv",
                "lambda_sweep.csv",
            ],
            "report": list(REPORT_TABLES)
            + ["roc.svg", "pr.svg", "score_distribution.svg", "differential.svg"],
        }
        for step, names in expected.items():
            for name in names + [MANIFEST]:
                with self.subTest(step=step, name=name):
                    self.assertTrue((self.root / step / name).is_file())
        self.assertTrue((self.root / MANIFEST).is_file())

    def test_manifests(self):
        for step in ("synth", "fit", "eval"):
            directory = self.root / step
            manifest = json.loads((directory / MANIFEST).read_text())
            self.assertEqual(manifest["command"], step)
            self.assertEqual(manifest["config_hash"], config_hash(manifest["config"]))
            for name, digest in manifest["outputs"].items():
                content = (directory / name).read_bytes()
                self.assertEqual(hashlib.sha256(content).hexdigest(), digest)

    def test_model(self):
        payload = json.loads((self.root / "fit" / "model.json").read_text())
        model = ScoreModel.from_dict(payload)
        self.assertTrue(model.is_feasible())
        self.assertEqual(len(model.beta), 40)
        scores = pd.read_csv(
            self.root / "fit" / "scores.csv", float_precision="round_trip"
        )
        features = pd.read_csv(
            self.root / "features" / "features.csv", float_precision="round_trip"
        )
        self.assertEqual(len(scores), len(features))

    def test_label_counts(self):
        counts = json.loads((self.root / "label" / "label_counts.json").read_text())
        sweep = pd.read_csv(self.root / "sweep" / "sweep_counts.csv")
        row = sweep[sweep["threshold"] == 6].iloc[0]
        self.assertEqual(row["high"], counts["High"])
        self.assertEqual(row["low"], counts["Low"])
        self.assertTrue((sweep["high"].diff().dropna() <= 0).all())


class TestRepeatedRun(unittest.TestCase):
    def test_same_seed_same_bytes(self):
        with tempfile.TemporaryDirectory() as directory:
            roots = [Path(directory) / name for name in ("a", "b")]
            for root in roots:
                code, stderr = _run(
                    "run",
                    "--out-dir", root,
                    "--n-encounters", 1200,
                    "--seed", 1,
                    "--folds", 3,
                    "--thresholds", 5, 6,
                )  # fmt: skip
                self.assertEqual(code, EXIT_OK, stderr)
            files = sorted(
                path.relative_to(roots[0])
                for path in roots[0].rglob("*")
                if path.is_file() and path.name != MANIFEST and path.suffix != ".svg"
            )
            names = {path.as_posix() for path in files}
            for name in ("eval/summary.json", "eval/oof_scores.csv", "fit/scores.csv"):
                self.assertIn(name, names)
            for path in files:
                with self.subTest(path=path.as_posix()):
                    self.assertEqual(
                        (roots[0] / path).read_bytes(), (roots[1] / path).read_bytes()
                    )


class TestCommands(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_synth_deterministic(self):
        for name in ("a", "b"):
            code, _ = _run(
                "synth", "--out-dir", self.path / name, "--n-encounters", 50
            )
            self.assertEqual(code, EXIT_OK)
        for name in ("encounters.jsonl", "truth.csv"):
            self.assertEqual(
                (self.path / "a" / name).read_bytes(),
                (self.path / "b" / name).read_bytes(),
            )

    def test_empty_encounters(self):
        empty = self.path / "empty.jsonl"
        empty.write_text("")
        code, stderr = _run(
            "label", "--out-dir", self.path / "out", "--encounters", empty
        )
        self.assertEqual(code, EXIT_VALIDATION)
        error = json.loads(stderr.strip().splitlines()[-1])
        self.assertEqual(error["error"], "InvalidInputError")
        self.assertEqual(error["exit_code"], EXIT_VALIDATION)

    def test_malformed_encounters(self):
        broken = self.path / "broken.jsonl"
        broken.write_text("{not json\n")
        code, _ = _run("label", "--out-dir", self.path / "out", "--encounters", broken)
        self.assertEqual(code, EXIT_VALIDATION)

    def test_missing_file(self):
        code, stderr = _run(
            "label",
            "--out-dir",
            self.path / "out",
            "--encounters",
            self.path / "missing.jsonl",
        )
        self.assertEqual(code, EXIT_IO)
        self.assertEqual(json.loads(stderr.strip().splitlines()[-1])["exit_code"], 4)

    def test_invalid_threshold(self):
        code, _ = _run("synth", "--out-dir", self.path / "s", "--n-encounters", 30)
        self.assertEqual(code, EXIT_OK)
        code, _ = _run(
            "label",
            "--out-dir",
            self.path / "out",
            "--encounters",
            self.path / "s" / "encounters.jsonl",
            "--high-threshold",
            1,
        )
        self.assertEqual(code, EXIT_VALIDATION)

    def test_lambdas_need_features(self):
        code, _ = _run("synth", "--out-dir", self.path / "s", "--n-encounters", 300)
        self.assertEqual(code, EXIT_OK)
        code, stderr = _run(
            "sweep",
            "--out-dir",
            self.path / "sweep",
            "--encounters",
            self.path / "s" / "encounters.jsonl",
            "--thresholds",
            6,
            "--lambdas",
            0.5,
        )
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("--features", stderr)

    def test_missing_out_dir(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as context:
                main(["synth"])
        self.assertEqual(context.exception.code, 2)


if __name__ == "__main__":
    unittest.main()
