# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .scoring import (
    CATEGORIES,
    ScoreDifferential,
    ScoredEncounter,
    categorize,
    category,
    category_order,
    category_transitions,
    score,
    score_differential,
    score_matrix,
    score_values,
    scored_frame,
)

__all__ = [
    "CATEGORIES",
    "ScoreDifferential",
    "ScoredEncounter",
    "categorize",
    "category",
    "category_order",
    "category_transitions",
    "score",
    "score_differential",
    "score_matrix",
    "score_values",
    "scored_frame",
]
