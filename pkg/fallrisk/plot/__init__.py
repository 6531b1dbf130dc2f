# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from .plot import (
    differential_plot,
    pr_plot,
    roc_plot,
    save_svg,
    score_distribution_plot,
)

__all__ = [
    "differential_plot",
    "pr_plot",
    "roc_plot",
    "save_svg",
    "score_distribution_plot",
]
