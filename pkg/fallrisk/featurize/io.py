# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import json
from pathlib import Path

import numpy as np
import pandas as pd

from fallrisk.preconditions import InvalidInputError, check_input
from fallrisk.utils import PathType, atomic_write, dumps

from .dictionary import FeatureDictionary
from .features import UNLABELED, FeatureMatrix

_META_COLUMNS = ["id", "y", "fall"]


def dictionary_path(path: PathType) -> Path:
    """
    Location of the JSON dictionary that accompanies a matrix CSV.

    >>> dictionary_path("out/features.csv").as_posix()
    'out/features.dictionary.json'
    """
    return Path(path).with_suffix(".dictionary.json")


def write_matrix(path: PathType, matrix: FeatureMatrix) -> None:
    """
    Writes ``matrix`` as CSV (``id``, ``y``, ``fall`` and one column per
    feature) with its feature dictionary as a JSON sidecar.
    """
    frame = pd.DataFrame(matrix.X, columns=list(matrix.dictionary.names))
    frame.insert(0, "fall", matrix.falls.astype(int))
    frame.insert(0, "y", matrix.y.astype(int))
    frame.insert(0, "id", list(matrix.ids))
    with atomic_write(path) as handle:
        frame.to_csv(handle, index=False, float_format="%.17g")
    with atomic_write(dictionary_path(path)) as handle:
        handle.write(dumps(matrix.dictionary.to_dict()))
        handle.write("\n")


def read_matrix(path: PathType) -> FeatureMatrix:
    """
    Reads a matrix written by :func:`write_matrix` and checks it against its
    dictionary.

    Raises
    ------
    InvalidInputError
        If the sidecar is missing or malformed, the columns differ from the
        dictionary, or values fall outside their feature's range.
    """
    sidecar = dictionary_path(path)
    try:
        with open(sidecar, encoding="utf-8") as handle:
            dictionary = FeatureDictionary.from_dict(json.load(handle))
    except json.JSONDecodeError as error:
        raise InvalidInputError(f"{sidecar}: not valid JSON ({error.msg})") from error
    try:
        frame = pd.read_csv(path, dtype={"id": str}, float_precision="round_trip")
    except pd.errors.EmptyDataError as error:
        raise InvalidInputError(f"{path}: empty feature file") from error
    expected = _META_COLUMNS + list(dictionary.names)
    check_input(
        list(frame.columns) == expected,
        f"{path}: columns do not match the feature dictionary in {sidecar}",
    )
    check_input(len(frame) > 0, f"{path}: no rows")
    X = frame[list(dictionary.names)].to_numpy(dtype=float)
    check_input(bool(np.all(np.isfinite(X))), f"{path}: non-finite feature values")
    check_input(
        bool(np.all((X >= 0) & (X <= 1))), f"{path}: feature values outside [0, 1]"
    )
    indicators = [
        i for i, spec in enumerate(dictionary.features) if spec.kind == "indicator"
    ]
    check_input(
        bool(np.all(np.isin(X[:, indicators], (0.0, 1.0)))),
        f"{path}: indicator columns must be 0 or 1",
    )
    y = frame["y"].to_numpy(dtype=int)
    check_input(
        bool(np.all(np.isin(y, (0, 1, UNLABELED)))),
        f"{path}: y must be 0, 1 or {UNLABELED}",
    )
    return FeatureMatrix(
        X=X,
        y=y,
        ids=tuple(frame["id"]),
        dictionary=dictionary,
        falls=frame["fall"].to_numpy(dtype=int).astype(bool),
    )
