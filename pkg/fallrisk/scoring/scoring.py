# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd
from beartype import beartype

from fallrisk.featurize import FeatureDictionary, FeatureMatrix
from fallrisk.preconditions import check_argument
from fallrisk.solver import ScoreModel
from fallrisk.types import CategoryName, Dict, List, Scalar, Tuple

CATEGORIES: Tuple[CategoryName, ...] = ("Low", "Moderate", "High")


class ScoredEncounter(NamedTuple):
    id: str
    score: float
    category: CategoryName
    contributions: Dict[str, float]
    """
    Feature name to ``beta_j * x_j``, in column order.
    """


class ScoreDifferential(NamedTuple):
    deltas: np.ndarray
    mean: float
    share_within_2: float
    share_within_5: float


def _check_layout(model: ScoreModel, dictionary: Optional[FeatureDictionary]) -> None:
    if dictionary is None or model.dictionary is None:
        return
    check_argument(
        dictionary.digest() == model.dictionary.digest(),
        "feature layout does not match the model's dictionary",
    )


def category(value: Scalar, thresholds: Tuple[float, float]) -> CategoryName:
    """
    Band of a single score: Low below the low threshold, High above the high
    threshold, Moderate in between with both ends included.

    >>> category(13.0, (6.0, 13.0)), category(5.99, (6.0, 13.0))
    ('Moderate', 'Low')
    """
    low, high = thresholds
    if value < low:
        return "Low"
    if value > high:
        return "High"
    return "Moderate"


def categorize(
    scores: Union[np.ndarray, Sequence[float]], thresholds: Tuple[float, float]
) -> np.ndarray:
    """
    Vectorized :func:`category`; returns an object array of category names.
    """
    values = np.asarray(scores, dtype=float)
    low, high = thresholds
    return np.where(
        values < low, "Low", np.where(values > high, "High", "Moderate")
    ).astype(object)


def category_order(name: CategoryName) -> int:
    return CATEGORIES.index(name)


@beartype
def score(
    model: ScoreModel,
    row: np.ndarray,
    encounter_id: str = "",
    dictionary: Optional[FeatureDictionary] = None,
) -> ScoredEncounter:
    """
    Scores one feature row.

    Parameters
    ----------
    model : ScoreModel
    row : np.ndarray, shape (m,)
        Feature row in the model's column order
    encounter_id : str
        Carried into the result
    dictionary : FeatureDictionary, optional
        Layout ``row`` was built with; must match the model's

    Returns
    -------
    scored : ScoredEncounter
        The score is the sum of the per-feature contributions in column order.

    Raises
    ------
    ValueError
        If the row length or its dictionary disagree with the model.
    """
    _check_layout(model, dictionary)
    values = np.asarray(row, dtype=float)
    check_argument(
        values.shape == model.beta.shape,
        f"row has shape {values.shape}, model expects {model.beta.shape}",
    )
    parts = (model.beta * values).tolist()
    contributions = dict(zip(model.feature_names, parts))
    total = float(sum(parts))
    return ScoredEncounter(
        encounter_id, total, category(total, model.thresholds), contributions
    )


def score_values(model: ScoreModel, X: np.ndarray) -> np.ndarray:
    """
    Scores of every row of ``X``.
    """
    X = np.asarray(X, dtype=float)
    check_argument(
        X.ndim == 2 and X.shape[1] == model.beta.shape[0],
        f"X has shape {X.shape}, model expects {model.beta.shape[0]} columns",
    )
    return X @ model.beta


@beartype
def score_matrix(model: ScoreModel, matrix: FeatureMatrix) -> List[ScoredEncounter]:
    _check_layout(model, matrix.dictionary)
    return [
        score(model, row, encounter_id)
        for row, encounter_id in zip(matrix.X, matrix.ids)
    ]


def scored_frame(
    model: ScoreModel, matrix: FeatureMatrix, top: int = 5
) -> pd.DataFrame:
    """
    One row per encounter: id, score, category and the ``top`` largest
    contributions as ``name=value`` strings.
    """
    rows = []
    for scored in score_matrix(model, matrix):
        ranked = sorted(
            scored.contributions.items(), key=lambda item: (-item[1], item[0])
        )
        row = {"id": scored.id, "score": scored.score, "category": scored.category}
        for rank in range(top):
            if rank < len(ranked) and ranked[rank][1] > 0:
                name, value = ranked[rank]
                row[f"contribution_{rank + 1}"] = f"{name}={value:.6g}"
            else:
                row[f"contribution_{rank + 1}"] = ""
        rows.append(row)
    columns = ["id", "score", "category"] + [
        f"contribution_{rank + 1}" for rank in range(top)
    ]
    return pd.DataFrame(rows, columns=columns)


@beartype
def score_differential(
    model_a: ScoreModel, model_b: ScoreModel, X: np.ndarray
) -> ScoreDifferential:
    """
    Per-encounter score differences ``model_a - model_b`` and their summary.

    Returns
    -------
    differential : ScoreDifferential
        The deltas, their mean and the shares within [-2, 2] and [-5, 5].

    Examples
    --------
    >>> from fallrisk.solver import ScoreModel
    >>> a = ScoreModel(np.array([1.0, 2.0]), None)
    >>> result = score_differential(a, a, np.eye(2))
    >>> result.mean, result.share_within_2
    (0.0, 1.0)
    """
    deltas = score_values(model_a, X) - score_values(model_b, X)
    check_argument(deltas.size > 0, "X must contain at least one row")
    magnitude = np.abs(deltas)
    return ScoreDifferential(
        deltas=deltas,
        mean=float(np.mean(deltas)),
        share_within_2=float(np.mean(magnitude <= 2)),
        share_within_5=float(np.mean(magnitude <= 5)),
    )


def category_transitions(
    baseline: ScoreModel, model: ScoreModel, matrix: FeatureMatrix
) -> pd.DataFrame:
    """
    How encounters move between bands when ``baseline`` is replaced by
    ``model``.

    Returns
    -------
    transitions : pd.DataFrame
        Columns ``y``, ``baseline_category``, ``model_category``, ``count`` and
        ``percent``, where the percentage is taken within each
        ``(y, baseline_category)`` group.
    """
    bands = pd.CategoricalDtype(list(CATEGORIES), ordered=True)
    baseline_scores = score_values(baseline, matrix.X)
    model_scores = score_values(model, matrix.X)
    frame = pd.DataFrame(
        {
            "y": matrix.y,
            "baseline_category": categorize(baseline_scores, baseline.thresholds),
            "model_category": categorize(model_scores, model.thresholds),
        }
    ).astype({"baseline_category": bands, "model_category": bands})
    counts = (
        frame.groupby(["y", "baseline_category", "model_category"], observed=True)
        .size()
        .rename("count")
        .reset_index()
    )
    totals = counts.groupby(["y", "baseline_category"], observed=True)[
        "count"
    ].transform("sum")
    counts["percent"] = 100.0 * counts["count"] / totals
    order = ["y", "baseline_category", "model_category"]
    return counts.sort_values(order).reset_index(drop=True)
