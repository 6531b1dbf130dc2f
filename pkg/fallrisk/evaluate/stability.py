# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import Optional, Sequence

import numpy as np
import pandas as pd

from fallrisk.preconditions import check_argument


def coefficient_shares(
    beta: np.ndarray,
    names: Sequence[str],
    subset: Optional[Sequence[str]] = None,
) -> pd.Series:
    """
    Each coefficient as a share of the coefficient sum.

    Parameters
    ----------
    beta : np.ndarray, shape (m,)
        Non-negative coefficients
    names : Sequence[str]
        Feature names, aligned with ``beta``
    subset : Sequence[str], optional
        Restrict both the shares and the sum to these features, e.g. the 18
        JHFRAT items

    Returns
    -------
    shares : pd.Series
        Indexed by feature name; all zero when the coefficients sum to zero.

    Examples
    --------
    >>> coefficient_shares(np.array([1.0, 3.0]), ["a", "b"]).tolist()
    [0.25, 0.75]
    """
    series = pd.Series(np.asarray(beta, dtype=float), index=list(names))
    check_argument(series.shape[0] == len(names), "beta and names must align")
    if subset is not None:
        series = series.loc[list(subset)]
    total = float(series.sum())
    if total <= 0:
        return series * 0.0
    return series / total


def stability_stats(
    coefficients: pd.DataFrame, subset: Optional[Sequence[str]] = None
) -> pd.DataFrame:
    """
    Spread of every feature's share of the coefficient sum across several fits.

    Parameters
    ----------
    coefficients : pd.DataFrame
        One row per fit (fold or sweep cohort), one column per feature
    subset : Sequence[str], optional
        Features the shares are computed over

    Returns
    -------
    stats : pd.DataFrame
        Indexed by feature with columns ``min``, ``max``, ``range`` and ``sd``
        (population standard deviation), all in share units.
    """
    check_argument(len(coefficients) > 0, "need at least one coefficient vector")
    shares = pd.DataFrame(
        [
            coefficient_shares(row.to_numpy(), list(coefficients.columns), subset)
            for _, row in coefficients.iterrows()
        ]
    )
    stats = pd.DataFrame(
        {
            "min": shares.min(axis=0),
            "max": shares.max(axis=0),
            "sd": shares.std(axis=0, ddof=0),
        }
    )
    stats.insert(2, "range", stats["max"] - stats["min"])
    stats.index.name = "feature"
    return stats
