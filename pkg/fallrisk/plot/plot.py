# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import Callable, Optional, Sequence

import matplotlib as mpl
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns
from matplotlib.axes import Axes
from matplotlib.figure import Figure

from fallrisk.evaluate.metrics import auc_pr, auc_roc, pr_points, roc_points
from fallrisk.jhfrat import HIGH_THRESHOLD, LOW_THRESHOLD
from fallrisk.preconditions import check_argument
from fallrisk.types import Tuple
from fallrisk.utils import PathType, atomic_write

FigSizeType = Tuple[int, int]

MODEL_LABELS = {
    "jhfrat": "JHFRAT",
    "optimized": "Optimized",
    "augmented": "Augmented",
}


def _label(model: str) -> str:
    return MODEL_LABELS.get(model, model)


def _check_scores(oof: pd.DataFrame, models: Sequence[str]) -> None:
    for model in models:
        check_argument(
            f"score_{model}" in oof.columns, f"no out-of-fold scores for {model!r}"
        )
    check_argument("y" in oof.columns, "out-of-fold table needs a y column")


def roc_plot(
    oof: pd.DataFrame,
    models: Sequence[str],
    ax: Optional[Axes] = None,
    figsize: FigSizeType = (6, 6),
    title: str = "ROC",
    context: str = "talk",
    font_scale: float = 0.8,
) -> Axes:
    """
    ROC curve of the pooled out-of-fold scores of every model, labelled with
    the mean and standard deviation of the fold AUCs when the table carries a
    ``fold`` column.

    Parameters
    ----------
    oof : pd.DataFrame
        Out-of-fold table with ``y`` and ``score_<model>`` columns
    models : Sequence[str]
        Models to draw
    ax : matplotlib Axes, optional
        Axes to draw on; a new figure is made otherwise

    Returns
    -------
    ax : matplotlib Axes
    """
    _check_scores(oof, models)
    with sns.plotting_context(context, font_scale=font_scale):
        if ax is None:
            _, ax = plt.subplots(figsize=figsize)
        palette = sns.color_palette("deep", len(models))
        for color, model in zip(palette, models):
            fpr, tpr = roc_points(oof[f"score_{model}"], oof["y"])
            ax.plot(fpr, tpr, color=color, label=_auc_label(oof, model, auc_roc))
        ax.plot([0, 1], [0, 1], color="grey", linestyle="--", linewidth=1)
        ax.set(xlabel="False positive rate", ylabel="True positive rate", title=title)
        ax.legend(loc="lower right")
    return ax


def pr_plot(
    oof: pd.DataFrame,
    models: Sequence[str],
    ax: Optional[Axes] = None,
    figsize: FigSizeType = (6, 6),
    title: str = "Precision-recall",
    context: str = "talk",
    font_scale: float = 0.8,
) -> Axes:
    """
    Precision-recall curve of the pooled out-of-fold scores of every model.
    """
    _check_scores(oof, models)
    with sns.plotting_context(context, font_scale=font_scale):
        if ax is None:
            _, ax = plt.subplots(figsize=figsize)
        palette = sns.color_palette("deep", len(models))
        for color, model in zip(palette, models):
            recall, precision = pr_points(oof[f"score_{model}"], oof["y"])
            ax.step(
                recall,
                precision,
                where="post",
                color=color,
                label=_auc_label(oof, model, auc_pr),
            )
        prevalence = float(np.mean(oof["y"]))
        ax.axhline(prevalence, color="grey", linestyle="--", linewidth=1)
        ax.set(xlabel="Recall", ylabel="Precision", title=title, ylim=(0, 1.02))
        ax.legend(loc="lower left")
    return ax


def _auc_label(
    oof: pd.DataFrame, model: str, metric: Callable[..., float]
) -> str:
    if "fold" not in oof.columns:
        return f"{_label(model)} ({metric(oof[f'score_{model}'], oof['y']):.2f})"
    per_fold = [
        metric(group[f"score_{model}"], group["y"])
        for _, group in oof.groupby("fold")
    ]
    spread = np.std(per_fold, ddof=1)
    return f"{_label(model)} ({np.mean(per_fold):.2f} ± {spread:.2f})"


def differential_plot(
    deltas: np.ndarray,
    ax: Optional[Axes] = None,
    figsize: FigSizeType = (7, 5),
    title: str = "Score differential",
    xlabel: str = "Optimized - JHFRAT score",
    context: str = "talk",
    font_scale: float = 0.8,
) -> Axes:
    """
    Histogram of per-encounter score differences with the +-2 and +-5 bands
    marked.
    """
    deltas = np.asarray(deltas, dtype=float)
    check_argument(deltas.ndim == 1 and deltas.size > 0, "deltas must be 1-d")
    with sns.plotting_context(context, font_scale=font_scale):
        if ax is None:
            _, ax = plt.subplots(figsize=figsize)
        sns.histplot(x=deltas, bins=40, ax=ax, color="steelblue")
        for edge, style in ((2, "--"), (5, ":")):
            for sign in (-1, 1):
                ax.axvline(sign * edge, color="black", linestyle=style, linewidth=1)
        ax.set(xlabel=xlabel, ylabel="Encounters", title=title)
    return ax


def score_distribution_plot(
    oof: pd.DataFrame,
    models: Sequence[str],
    figsize: FigSizeType = (12, 5),
    thresholds: Tuple[float, float] = (LOW_THRESHOLD, HIGH_THRESHOLD),
    context: str = "talk",
    font_scale: float = 0.8,
) -> Figure:
    """
    Score histograms per class, one panel per model, with the category
    thresholds marked.
    """
    _check_scores(oof, models)
    with sns.plotting_context(context, font_scale=font_scale):
        fig, axes = plt.subplots(1, len(models), figsize=figsize, squeeze=False)
        for ax, model in zip(axes[0], models):
            frame = pd.DataFrame(
                {
                    "score": oof[f"score_{model}"].to_numpy(),
                    "label": np.where(oof["y"].to_numpy() == 1, "High", "Low"),
                }
            )
            sns.histplot(
                data=frame,
                x="score",
                hue="label",
                hue_order=["Low", "High"],
                stat="density",
                common_norm=False,
                element="step",
                ax=ax,
            )
            for threshold in thresholds:
                ax.axvline(threshold, color="black", linestyle="--", linewidth=1)
            ax.set(title=_label(model), xlabel="Score")
        fig.tight_layout()
    return fig


def save_svg(figure: Figure, path: PathType) -> None:
    """
    Writes ``figure`` as an SVG that is byte-identical across runs, then
    closes it.
    """
    with mpl.rc_context({"svg.hashsalt": "fallrisk"}):
        with atomic_write(path, "wb") as handle:
            figure.savefig(handle, format="svg", metadata={"Date": None})
    plt.close(figure)
