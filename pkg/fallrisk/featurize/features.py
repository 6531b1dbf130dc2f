# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
import math
from typing import NamedTuple, Sequence, Union

import numpy as np
import pandas as pd
from beartype import beartype

from fallrisk.cohort import Cohort, Encounter
from fallrisk.jhfrat import JHFRAT_ITEM_NAMES, JHFRAT_POINTS
from fallrisk.preconditions import EmptyCohortError, check_argument, check_input
from fallrisk.types import Tuple

from .dictionary import (
    AMPAC_BINS,
    COMORBIDITY_BINS,
    JHHLM_BINS,
    RACE_COLUMNS,
    SERVICE_COLUMNS,
    SEX_COLUMNS,
    FeatureDictionary,
    build_dictionary,
)

logger = logging.getLogger(__name__)

UNLABELED = -1

# right-closed upper edges of the AM-PAC bins
_AMPAC_EDGES = np.array([25.0, 35.0, 45.0])

_EHR_COLUMNS: Tuple[str, ...] = (
    AMPAC_BINS
    + JHHLM_BINS
    + COMORBIDITY_BINS
    + SEX_COLUMNS
    + RACE_COLUMNS
    + SERVICE_COLUMNS
)

_JHFRAT_COEFFICIENTS = np.array(
    [JHFRAT_POINTS[name] for name in JHFRAT_ITEM_NAMES], dtype=float
)


class FeatureMatrix(NamedTuple):
    """
    Feature rows of a set of encounters.

    Attributes
    ----------
    X : np.ndarray, shape (n, m)
        JHFRAT columns in [0, 1], indicator columns in {0, 1}.
    y : np.ndarray, shape (n,)
        Binary labels, or ``UNLABELED`` for encounters without one.
    ids : Tuple[str, ...]
        Encounter ids, row aligned.
    dictionary : FeatureDictionary
        Column layout.
    falls : np.ndarray, shape (n,)
        True for encounters with a documented fall.
    """

    X: np.ndarray
    y: np.ndarray
    ids: Tuple[str, ...]
    dictionary: FeatureDictionary
    falls: np.ndarray

    @property
    def n_samples(self) -> int:
        return int(self.X.shape[0])

    @property
    def labeled(self) -> bool:
        return bool(np.all(self.y != UNLABELED))


@beartype
def average_jhfrat(encounter: Encounter) -> np.ndarray:
    """
    Share of the encounter's assessments on which each JHFRAT item was flagged.

    Parameters
    ----------
    encounter : Encounter
        An encounter with at least one assessment. Fall encounters are expected
        to be truncated already, so only pre-fall assessments count.

    Returns
    -------
    averages : np.ndarray, shape (18,)
        In catalog order, each in [0, 1].

    Raises
    ------
    InvalidInputError
        If the encounter has no assessments.
    """
    check_input(
        len(encounter.assessments) > 0,
        f"encounter {encounter.id}: no assessments to average",
    )
    flags = np.array(
        [
            [name in record.jhfrat_items for name in JHFRAT_ITEM_NAMES]
            for record in encounter.assessments
        ],
        dtype=float,
    )
    return flags.mean(axis=0)


def _one_hot(size: int, position: int) -> np.ndarray:
    vector = np.zeros(size)
    vector[position] = 1.0
    return vector


def _ampac_group(encounter: Encounter) -> np.ndarray:
    values = [r.ampac for r in encounter.assessments if r.ampac is not None]
    for value in values:
        check_input(
            value >= 0, f"encounter {encounter.id}: ampac must be non-negative"
        )
    if not values:
        return np.zeros(len(AMPAC_BINS))
    mean = float(np.mean(values))
    return _one_hot(len(AMPAC_BINS), int(np.searchsorted(_AMPAC_EDGES, mean)))


def _jhhlm_group(encounter: Encounter) -> np.ndarray:
    values = [r.jhhlm for r in encounter.assessments if r.jhhlm is not None]
    for value in values:
        check_input(
            1 <= value <= 8, f"encounter {encounter.id}: jhhlm {value} outside 1-8"
        )
    if not values:
        return np.zeros(len(JHHLM_BINS))
    # half-up rounding, so a mean of 3.5 lands in the 4-5 bin
    level = math.floor(float(np.mean(values)) + 0.5)
    if level <= 3:
        position = 0
    elif level <= 5:
        position = 1
    else:
        position = 2
    return _one_hot(len(JHHLM_BINS), position)


def _comorbidity_group(count: int) -> np.ndarray:
    if count < 5:
        position = 0
    elif count <= 10:
        position = 1
    else:
        position = 2
    return _one_hot(len(COMORBIDITY_BINS), position)


@beartype
def bin_ehr(encounter: Encounter) -> np.ndarray:
    """
    Indicator encoding of the EHR variables of an encounter.

    AM-PAC and JH-HLM are averaged over the assessments that chart them and
    the mean is binned: AM-PAC into (-inf, 25], (25, 35], (35, 45], (45, inf);
    JH-HLM, rounded half-up, into 1-3, 4-5, 6-8. A measure that is never
    charted leaves its whole group at zero. Comorbidities are binned into
    [0, 5), [5, 10], (10, inf); sex, race and service are one-hot.

    Parameters
    ----------
    encounter : Encounter

    Returns
    -------
    indicators : np.ndarray, shape (22,)

    Raises
    ------
    InvalidInputError
        If a JH-HLM value lies outside 1-8, an AM-PAC value is negative, or a
        demographic value is not one of the known levels.

    Examples
    --------
    >>> from fallrisk.cohort import AssessmentRecord, Demographics, Encounter
    >>> demo = Demographics(50, "male", "other", "neurosurgery", 10)
    >>> record = AssessmentRecord(1, frozenset(), jhhlm=7, ampac=25.0)
    >>> e = Encounter("e", "h", 2, (0, 0), (frozenset(),) * 2, (record,), demo)
    >>> bin_ehr(e).astype(int).tolist()
    [1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0]
    """
    demographics = encounter.demographics
    check_input(
        demographics.comorbidity_count >= 0,
        f"encounter {encounter.id}: comorbidity_count must be non-negative",
    )
    for column, levels in (
        (f"sex_{demographics.sex}", SEX_COLUMNS),
        (f"race_{demographics.race}", RACE_COLUMNS),
        (f"service_{demographics.service}", SERVICE_COLUMNS),
    ):
        check_input(
            column in levels, f"encounter {encounter.id}: unknown level {column}"
        )
    return np.concatenate(
        [
            _ampac_group(encounter),
            _jhhlm_group(encounter),
            _comorbidity_group(demographics.comorbidity_count),
            _one_hot(len(SEX_COLUMNS), SEX_COLUMNS.index(f"sex_{demographics.sex}")),
            _one_hot(
                len(RACE_COLUMNS), RACE_COLUMNS.index(f"race_{demographics.race}")
            ),
            _one_hot(
                len(SERVICE_COLUMNS),
                SERVICE_COLUMNS.index(f"service_{demographics.service}"),
            ),
        ]
    )


def _encounter_row(encounter: Encounter, dictionary: FeatureDictionary) -> np.ndarray:
    jhfrat = average_jhfrat(encounter)
    if not dictionary.augmented:
        return jhfrat
    values = dict(zip(_EHR_COLUMNS, bin_ehr(encounter)))
    ehr = [values[dictionary.features[i].name] for i in dictionary.columns("ehr")]
    return np.concatenate([jhfrat, np.asarray(ehr, dtype=float)])


@beartype
def encounter_matrix(
    encounters: Sequence[Encounter], dictionary: FeatureDictionary
) -> np.ndarray:
    """
    Feature rows of ``encounters`` in the column order of ``dictionary``,
    whatever their label.
    """
    if not encounters:
        return np.zeros((0, dictionary.n_features))
    return np.vstack([_encounter_row(e, dictionary) for e in encounters])


@beartype
def build_matrix(
    cohort: Cohort, augmented: bool = True, include_unknown: bool = False
) -> FeatureMatrix:
    """
    Builds the training matrix of a labeled cohort.

    Parameters
    ----------
    cohort : Cohort
        Output of :func:`~fallrisk.cohort.build_cohort`
    augmented : bool (default=True)
        Append the EHR indicators; ``False`` gives the 18 JHFRAT columns only
    include_unknown : bool (default=False)
        Return the encounters without a binary label (``y == UNLABELED``)
        instead of the binary cohort

    Returns
    -------
    matrix : FeatureMatrix
        One row per encounter, in cohort order.

    Raises
    ------
    EmptyCohortError
        If the cohort has no binary-labeled encounters.
    """
    binary = cohort.binary()
    if not binary:
        raise EmptyCohortError("cohort has no Low or High encounters to featurize")
    records = cohort.unknown() if include_unknown else binary
    dictionary = build_dictionary(augmented)
    encounters = [record.encounter for record in records]
    X = encounter_matrix(encounters, dictionary)
    y = np.array(
        [UNLABELED if r.y is None else r.y for r in records], dtype=int
    ).reshape(-1)
    falls = np.array([e.fall_day is not None for e in encounters], dtype=bool)
    logger.info(
        f"Built {X.shape[0]} x {X.shape[1]} feature matrix "
        f"({'augmented' if augmented else 'JHFRAT only'})"
    )
    return FeatureMatrix(X, y, tuple(e.id for e in encounters), dictionary, falls)


def jhfrat_only(matrix: FeatureMatrix) -> FeatureMatrix:
    """
    Restricts a matrix to its 18 JHFRAT columns.
    """
    columns = matrix.dictionary.columns("jhfrat")
    return matrix._replace(
        X=matrix.X[:, columns], dictionary=build_dictionary(augmented=False)
    )


def baseline_jhfrat_score(row: Union[np.ndarray, Sequence[float]]) -> np.ndarray:
    """
    Published JHFRAT score of one row or of every row of a matrix, from its
    leading 18 columns.

    >>> row = np.zeros(18)
    >>> row[JHFRAT_ITEM_NAMES.index("requires_assistance")] = 0.5
    >>> float(baseline_jhfrat_score(row))
    1.0
    """
    values = np.asarray(row, dtype=float)
    check_argument(
        values.shape[-1] >= len(_JHFRAT_COEFFICIENTS),
        f"rows need at least {len(_JHFRAT_COEFFICIENTS)} columns",
    )
    return values[..., : len(_JHFRAT_COEFFICIENTS)] @ _JHFRAT_COEFFICIENTS


def occurrence_rates(matrix: FeatureMatrix) -> pd.Series:
    """
    Mean of every column over the rows of ``matrix``, indexed by feature name.
    """
    return pd.Series(matrix.X.mean(axis=0), index=list(matrix.dictionary.names))
