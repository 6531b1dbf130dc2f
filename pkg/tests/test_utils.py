# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import json
import tempfile
import unittest
from pathlib import Path

import numpy as np

from fallrisk.utils import atomic_write, config_hash, dumps, to_jsonable


class TestAtomicWrite(unittest.TestCase):
    def test_creates_parents(self):
        with tempfile.TemporaryDirectory() as directory:
            target = Path(directory) / "a" / "b" / "out.txt"
            with atomic_write(target) as handle:
                handle.write("done")
            self.assertEqual(target.read_text(), "done")
            self.assertEqual(list(target.parent.iterdir()), [target])

    def test_failure_keeps_previous_content(self):
        with tempfile.TemporaryDirectory() as directory:
            target = Path(directory) / "out.bin"
            target.write_bytes(b"old")
            with self.assertRaises(RuntimeError):
                with atomic_write(target, "wb") as handle:
                    handle.write(b"partial")
                    raise RuntimeError("interrupted")
            self.assertEqual(target.read_bytes(), b"old")
            self.assertEqual(list(Path(directory).iterdir()), [target])


class TestJson(unittest.TestCase):
    def test_to_jsonable(self):
        value = {
            "array": np.arange(3),
            "scalar": np.float64(0.5),
            "count": np.int64(2),
            "flag": np.bool_(True),
            "kinds": frozenset({"b", "a"}),
            "pair": (1, 2),
        }
        self.assertEqual(
            to_jsonable(value),
            {
                "array": [0, 1, 2],
                "scalar": 0.5,
                "count": 2,
                "flag": True,
                "kinds": ["a", "b"],
                "pair": [1, 2],
            },
        )

    def test_dumps_non_finite_as_null(self):
        text = dumps({"auc": float("nan"), "condition": np.float64("inf"), "ok": 0.5})
        self.assertNotIn("NaN", text)
        self.assertNotIn("Infinity", text)
        self.assertEqual(
            json.loads(text), {"auc": None, "condition": None, "ok": 0.5}
        )

    def test_dumps_sorted(self):
        text = dumps({"b": 1, "a": np.int64(2)})
        self.assertEqual(json.loads(text), {"a": 2, "b": 1})
        self.assertLess(text.index('"a"'), text.index('"b"'))

    def test_config_hash(self):
        self.assertEqual(config_hash({"b": 1, "a": 2}), config_hash({"a": 2, "b": 1}))
        self.assertNotEqual(config_hash({"a": 1}), config_hash({"a": 2}))
        self.assertEqual(len(config_hash({})), 64)


if __name__ == "__main__":
    unittest.main()
