# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import Sequence, Union

import numpy as np
import pandas as pd

from fallrisk.featurize import UNLABELED
from fallrisk.preconditions import check_argument
from fallrisk.scoring import CATEGORIES
from fallrisk.types import Tuple

RISK_LABELS: Tuple[str, ...] = ("Low", "High", "Unknown")
STRATA: Tuple[str, ...] = ("non_fall", "fall")


def risk_label_names(y: Union[np.ndarray, Sequence[int]]) -> np.ndarray:
    """
    Report names of binary labels: 0 is Low, 1 is High, anything unlabeled is
    Unknown.
    """
    y = np.asarray(y)
    return np.where(
        y == UNLABELED, "Unknown", np.where(y == 1, "High", "Low")
    ).astype(object)


def concordance_table(
    categories: Sequence[str],
    labels: Sequence[str],
    falls: Union[np.ndarray, Sequence[bool]],
) -> pd.DataFrame:
    """
    Cross-tabulates risk labels against predicted categories, separately for
    encounters without and with a fall.

    Parameters
    ----------
    categories : Sequence[str]
        Predicted band per encounter (Low, Moderate, High)
    labels : Sequence[str]
        Risk label per encounter (Low, High, Unknown)
    falls : Sequence[bool]
        Whether each encounter had a fall

    Returns
    -------
    table : pd.DataFrame
        One row per stratum, risk label and category with ``count`` and
        ``percent`` (of the stratum's risk label row; 0 for empty rows). Every
        combination is present.

    Examples
    --------
    >>> table = concordance_table(["Low"], ["Low"], [False])
    >>> nonzero = table[table["count"] > 0]
    >>> nonzero[["stratum", "risk_label", "category"]].values.tolist()
    [['non_fall', 'Low', 'Low']]
    >>> nonzero["percent"].tolist()
    [100.0]
    """
    frame = pd.DataFrame(
        {
            "category": np.asarray(categories, dtype=object),
            "risk_label": np.asarray(labels, dtype=object),
            "fall": np.asarray(falls, dtype=bool),
        }
    )
    check_argument(
        bool(frame["category"].isin(CATEGORIES).all()),
        f"categories must be among {CATEGORIES}",
    )
    check_argument(
        bool(frame["risk_label"].isin(RISK_LABELS).all()),
        f"risk labels must be among {RISK_LABELS}",
    )
    blocks = []
    for stratum, fall in zip(STRATA, (False, True)):
        subset = frame[frame["fall"] == fall]
        if subset.empty:
            counts = pd.DataFrame(0, index=list(RISK_LABELS), columns=list(CATEGORIES))
        else:
            counts = pd.crosstab(subset["risk_label"], subset["category"]).reindex(
                index=list(RISK_LABELS), columns=list(CATEGORIES), fill_value=0
            )
        totals = counts.sum(axis=1)
        percent = counts.div(totals.where(totals > 0), axis=0).fillna(0.0) * 100.0
        blocks.append(
            pd.DataFrame(
                [
                    {
                        "stratum": stratum,
                        "risk_label": label,
                        "category": band,
                        "count": int(counts.loc[label, band]),
                        "percent": float(percent.loc[label, band]),
                    }
                    for label in RISK_LABELS
                    for band in CATEGORIES
                ]
            )
        )
    return pd.concat(blocks, ignore_index=True)
