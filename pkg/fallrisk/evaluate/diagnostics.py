# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import Sequence

import numpy as np
import pandas as pd

from fallrisk.cohort import Encounter
from fallrisk.featurize import average_jhfrat, baseline_jhfrat_score
from fallrisk.preconditions import check_argument

from .metrics import spearman


def intervention_frame(encounters: Sequence[Encounter]) -> pd.DataFrame:
    """
    Per encounter: the mean JHFRAT score of its assessments and the mean
    number of targeted interventions per day.
    """
    return pd.DataFrame(
        {
            "id": [e.id for e in encounters],
            "mean_jhfrat_score": [
                float(baseline_jhfrat_score(average_jhfrat(e))) for e in encounters
            ],
            "mean_daily_targeted": [
                float(np.mean(e.daily_targeted)) for e in encounters
            ],
        }
    )


def intervention_correlation(encounters: Sequence[Encounter]) -> float:
    """
    Spearman correlation between the average assessed JHFRAT score and the
    average daily number of targeted interventions, over encounters. A strong
    positive value supports intervention intensity as a proxy for assessed
    risk.
    """
    check_argument(len(encounters) >= 2, "need at least two encounters")
    frame = intervention_frame(encounters)
    return spearman(frame["mean_jhfrat_score"], frame["mean_daily_targeted"])
