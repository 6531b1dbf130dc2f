# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import logging
from typing import Mapping, NamedTuple, Optional

import numpy as np
import pandas as pd
from beartype import beartype
from joblib import Parallel, delayed
from scipy.special import expit
from sklearn.utils import check_scalar

from fallrisk.cohort import (
    RACES,
    SERVICES,
    SEXES,
    AssessmentRecord,
    Demographics,
    Encounter,
)
from fallrisk.jhfrat import JHFRAT_ITEM_NAMES, JHFRAT_ITEMS, SINGLE_SELECT_GROUPS
from fallrisk.preconditions import check_argument
from fallrisk.types import Dict, FrozenSet, List, Tuple
from fallrisk.utils import PathType, atomic_write

logger = logging.getLogger(__name__)

NONTARGETED_KINDS: Tuple[str, ...] = (
    "call_light_in_reach",
    "hourly_rounding",
    "low_bed",
    "non_slip_socks",
    "patient_education",
    "toileting_schedule",
    "wristband",
    "yellow_signage",
)

# logit-scale effect of each latent JHFRAT trait on the true risk; these differ
# from the published points on purpose (fall history carries no risk here)
GROUND_TRUTH_ITEM_EFFECTS: Dict[str, float] = {
    "age_60_69": 0.4,
    "age_70_79": 0.8,
    "age_80_plus": 1.2,
    "incontinence": 0.6,
    "urgency_frequency": 0.6,
    "altered_awareness": 1.2,
    "impulsive": 1.2,
    "lack_of_understanding": 1.6,
    "equipment_one": 0.3,
    "equipment_two": 0.6,
    "equipment_three_plus": 0.9,
    "fall_history": 0.0,
    "meds_one": 0.4,
    "meds_two_plus": 0.6,
    "sedated_procedure": 1.0,
    "requires_assistance": 1.8,
    "unsteady_gait": 0.8,
    "visual_auditory_impairment": 0.6,
}

# effects of the AM-PAC bins <=25, 25-35, 35-45, >45
AMPAC_EFFECTS: Tuple[float, ...] = (1.2, 0.6, 0.2, 0.0)

# effects of the comorbidity bins <5, 5-10, >10
COMORBIDITY_EFFECTS: Tuple[float, ...] = (0.0, 0.3, 0.6)

SERVICE_EFFECTS: Dict[str, float] = {
    "medicine": 0.0,
    "surgery": 0.0,
    "oncology_hematology": 0.1,
    "neurosurgery": 0.5,
    "orthopedics": 0.3,
    "neurology": 0.4,
    "other": 0.0,
}

SERVICE_SHARES: Tuple[float, ...] = (0.40, 0.20, 0.12, 0.06, 0.08, 0.06, 0.08)
RACE_SHARES: Tuple[float, ...] = (0.30, 0.60, 0.10)

_AGE_RANGES: Dict[Optional[str], Tuple[int, int]] = {
    None: (18, 59),
    "age_60_69": (60, 69),
    "age_70_79": (70, 79),
    "age_80_plus": (80, 99),
}


class SynthConfig(NamedTuple):
    """
    Parameters of a synthetic cohort.

    Parameters
    ----------
    n_encounters : int (default=20_000)
    seed : int (default=1)
        Root seed; every encounter draws from its own spawned substream.
    intercept : float (default=-3.6)
        Logit-scale intercept of the latent risk.
    persistence : float (default=0.9)
        Chance that an assessment flags an item the patient has.
    spurious : float (default=0.01)
        Chance that an assessment flags a (non single-select) item the patient
        does not have.
    item_rates : Mapping[str, float], optional
        Target per-assessment occurrence rate of every JHFRAT item; defaults to
        the catalog rates.
    intensity_scale : float (default=5.0)
        Expected daily targeted interventions at latent risk 1.
    intensity_power : float (default=2.0)
        Expected daily targeted interventions are
        ``intensity_scale * risk ** intensity_power``; 0 makes them constant.
    fall_hazard_scale : float (default=0.003)
        Daily fall probability at latent risk 0.5; proportional to risk.
    mean_length_days : float (default=5.0)
        Mean length of stay, drawn as ``2 + Poisson`` and capped at 21 days.
    extra_assessment_rate : float (default=0.5)
        Chance of a second assessment on a given day.
    ampac_missing_rate : float (default=0.05)
        Chance that an encounter never charts AM-PAC nor JH-HLM.
    hospitals : Tuple[str, ...] (default=("hospital_a", "hospital_b"))
    """

    n_encounters: int = 20_000
    seed: int = 1
    intercept: float = -3.6
    persistence: float = 0.9
    spurious: float = 0.01
    item_rates: Optional[Mapping[str, float]] = None
    intensity_scale: float = 5.0
    intensity_power: float = 2.0
    fall_hazard_scale: float = 0.003
    mean_length_days: float = 5.0
    extra_assessment_rate: float = 0.5
    ampac_missing_rate: float = 0.05
    hospitals: Tuple[str, ...] = ("hospital_a", "hospital_b")


class SyntheticCohort(NamedTuple):
    encounters: Tuple[Encounter, ...]
    truth: pd.DataFrame
    """
    Per encounter: id, latent_risk, linear_predictor, expected_daily_targeted.
    """


def _probability(value: float, name: str) -> None:
    check_scalar(value, name=name, target_type=(int, float), min_val=0, max_val=1)


def trait_prevalences(config: SynthConfig) -> Dict[str, float]:
    """
    Latent trait prevalence of every item such that the expected
    per-assessment occurrence rate equals its target:
    ``prevalence * persistence + (1 - prevalence) * spurious`` for independent
    items and ``prevalence * persistence`` for single-select levels.

    Raises
    ------
    ValueError
        If a target cannot be reached or a single-select group needs more than
        all patients.
    """
    catalog = {item.name: item.occurrence_rate for item in JHFRAT_ITEMS}
    targets = dict(config.item_rates or catalog)
    check_argument(
        set(targets) == set(JHFRAT_ITEM_NAMES),
        "item_rates must name every JHFRAT item exactly once",
    )
    grouped = {name for members in SINGLE_SELECT_GROUPS.values() for name in members}
    prevalences = {}
    for name in JHFRAT_ITEM_NAMES:
        target = targets[name]
        _probability(target, f"item_rates[{name!r}]")
        if name in grouped:
            prevalence = target / config.persistence
        else:
            prevalence = (target - config.spurious) / (
                config.persistence - config.spurious
            )
        check_argument(
            0 <= prevalence <= 1,
            f"item rate {target} of {name} is unreachable with persistence "
            f"{config.persistence} and spurious rate {config.spurious}",
        )
        prevalences[name] = prevalence
    for group, members in SINGLE_SELECT_GROUPS.items():
        total = sum(prevalences[name] for name in members)
        check_argument(
            total <= 1, f"{group} levels need a combined prevalence of {total:.3f} > 1"
        )
    return prevalences


def check_synth_config(config: SynthConfig) -> None:
    check_scalar(config.n_encounters, name="n_encounters", target_type=int, min_val=1)
    check_scalar(config.seed, name="seed", target_type=int, min_val=0)
    probabilities = (
        "persistence",
        "spurious",
        "extra_assessment_rate",
        "ampac_missing_rate",
    )
    for name in probabilities:
        _probability(getattr(config, name), name)
    check_argument(
        config.spurious < config.persistence,
        "spurious must be smaller than persistence",
    )
    for name in ("intensity_scale", "intensity_power"):
        check_scalar(
            getattr(config, name), name=name, target_type=(int, float), min_val=0
        )
    check_scalar(
        config.fall_hazard_scale,
        name="fall_hazard_scale",
        target_type=(int, float),
        min_val=0,
        max_val=0.5,
    )
    check_scalar(
        config.mean_length_days,
        name="mean_length_days",
        target_type=(int, float),
        min_val=2,
        max_val=21,
    )
    check_argument(len(config.hospitals) > 0, "need at least one hospital")
    trait_prevalences(config)


def _draw_traits(
    rng: np.random.Generator, prevalences: Dict[str, float]
) -> FrozenSet[str]:
    traits = set()
    grouped = set()
    for members in SINGLE_SELECT_GROUPS.values():
        grouped.update(members)
        shares = np.array([prevalences[name] for name in members])
        level = rng.choice(len(members) + 1, p=np.append(shares, 1.0 - shares.sum()))
        if level < len(members):
            traits.add(members[level])
    for name in JHFRAT_ITEM_NAMES:
        if name not in grouped and rng.random() < prevalences[name]:
            traits.add(name)
    return frozenset(traits)


def _observed_items(
    rng: np.random.Generator, traits: FrozenSet[str], config: SynthConfig
) -> FrozenSet[str]:
    flagged = set()
    grouped = {name for members in SINGLE_SELECT_GROUPS.values() for name in members}
    for name in JHFRAT_ITEM_NAMES:
        if name in traits:
            if rng.random() < config.persistence:
                flagged.add(name)
        elif name not in grouped and rng.random() < config.spurious:
            flagged.add(name)
    return frozenset(flagged)


def _ampac_bin(value: float) -> int:
    return int(np.searchsorted([25.0, 35.0, 45.0], value))


def _comorbidity_bin(count: int) -> int:
    return 0 if count < 5 else (1 if count <= 10 else 2)


def _age_level(traits: FrozenSet[str]) -> Optional[str]:
    for name in SINGLE_SELECT_GROUPS["Age"]:
        if name in traits:
            return name
    return None


def _encounter(
    index: int,
    seed_sequence: np.random.SeedSequence,
    config: SynthConfig,
    prevalences: Dict[str, float],
) -> Tuple[Encounter, Dict[str, float]]:
    rng = np.random.default_rng(seed_sequence)
    eid = f"enc{index:06d}"
    traits = _draw_traits(rng, prevalences)

    low_age, high_age = _AGE_RANGES[_age_level(traits)]
    demographics = Demographics(
        age_years=int(rng.integers(low_age, high_age + 1)),
        sex=SEXES[int(rng.integers(len(SEXES)))],
        race=RACES[int(rng.choice(len(RACES), p=RACE_SHARES))],
        service=SERVICES[int(rng.choice(len(SERVICES), p=SERVICE_SHARES))],
        comorbidity_count=int(rng.poisson(5.0)),
    )
    ampac_mean = float(
        np.clip(
            55.0
            - 12.0 * ("requires_assistance" in traits)
            - 8.0 * ("unsteady_gait" in traits)
            - 5.0 * ("age_80_plus" in traits)
            + rng.normal(0.0, 10.0),
            6.0,
            100.0,
        )
    )
    linear_predictor = (
        config.intercept
        + sum(GROUND_TRUTH_ITEM_EFFECTS[name] for name in traits)
        + AMPAC_EFFECTS[_ampac_bin(ampac_mean)]
        + COMORBIDITY_EFFECTS[_comorbidity_bin(demographics.comorbidity_count)]
        + SERVICE_EFFECTS[demographics.service]
    )
    risk = float(expit(linear_predictor))
    intensity = config.intensity_scale * risk**config.intensity_power

    length = int(min(21, 2 + rng.poisson(config.mean_length_days - 2.0)))
    daily_targeted = tuple(int(c) for c in rng.poisson(intensity, size=length))
    kind_probability = expit(-1.0 + 3.0 * (risk - 0.5))
    daily_nontargeted = tuple(
        frozenset(
            kind for kind in NONTARGETED_KINDS if rng.random() < kind_probability
        )
        for _ in range(length)
    )

    charts_mobility = rng.random() >= config.ampac_missing_rate
    assessments: List[AssessmentRecord] = []
    for day in range(1, length + 1):
        per_day = 1 + int(rng.random() < config.extra_assessment_rate)
        for _ in range(per_day):
            ampac = jhhlm = None
            if charts_mobility and rng.random() < 0.8:
                ampac = float(round(max(0.0, ampac_mean + rng.normal(0.0, 3.0)), 1))
                jhhlm = int(np.clip(round(1 + 7 * (ampac - 10.0) / 70.0), 1, 8))
            items = _observed_items(rng, traits, config)
            assessments.append(AssessmentRecord(day, items, jhhlm, ampac))

    fall_day = None
    hazard = min(1.0, config.fall_hazard_scale * risk / 0.5)
    for day in range(1, length + 1):
        if rng.random() < hazard:
            fall_day = day
            break

    encounter = Encounter(
        id=eid,
        hospital=config.hospitals[index % len(config.hospitals)],
        admit_length_days=length,
        daily_targeted=daily_targeted,
        daily_nontargeted=daily_nontargeted,
        assessments=tuple(assessments),
        demographics=demographics,
        fall_day=fall_day,
    )
    truth = {
        "id": eid,
        "latent_risk": risk,
        "linear_predictor": float(linear_predictor),
        "expected_daily_targeted": float(intensity),
    }
    return encounter, truth


def _chunk(
    start: int,
    seeds: List[np.random.SeedSequence],
    config: SynthConfig,
    prevalences: Dict[str, float],
) -> List[Tuple[Encounter, Dict[str, float]]]:
    return [
        _encounter(start + offset, seed, config, prevalences)
        for offset, seed in enumerate(seeds)
    ]


@beartype
def generate(config: SynthConfig = SynthConfig(), workers: int = 1) -> SyntheticCohort:
    """
    Draws a synthetic cohort whose intervention intensity follows a known
    latent risk.

    Every encounter gets latent JHFRAT traits (one level per single-select
    category), a mobility score, demographics and comorbidities. The latent
    risk is the logistic function of an additive score over these with
    weights that deliberately differ from the published JHFRAT points. Each
    day then draws a Poisson number of targeted interventions with mean
    ``intensity_scale * risk ** intensity_power``, a set of non-targeted
    interventions that grows with risk, one or two assessments that flag
    the patient's traits with some noise, and possibly a fall with
    probability proportional to risk.

    Parameters
    ----------
    config : SynthConfig
    workers : int (default=1)
        Parallel chunks. Output does not depend on it.

    Returns
    -------
    cohort : SyntheticCohort
        Encounters in id order and the hidden truth table

    Raises
    ------
    ValueError
        If a probability lies outside [0, 1] or an item rate is unreachable.
    """
    check_synth_config(config)
    prevalences = trait_prevalences(config)
    seeds = np.random.SeedSequence(config.seed).spawn(config.n_encounters)
    n_chunks = max(1, min(config.n_encounters, 8 * max(1, workers)))
    bounds = np.linspace(0, config.n_encounters, n_chunks + 1).astype(int)
    chunks = Parallel(n_jobs=workers)(
        delayed(_chunk)(int(lo), seeds[lo:hi], config, prevalences)
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    )
    pairs = [pair for chunk in chunks for pair in chunk]
    encounters = tuple(encounter for encounter, _ in pairs)
    truth = pd.DataFrame([row for _, row in pairs])
    logger.info(
        f"Generated {len(encounters)} synthetic encounters "
        f"({sum(e.fall_day is not None for e in encounters)} with a fall)"
    )
    return SyntheticCohort(encounters, truth)


def write_truth(path: PathType, cohort: SyntheticCohort) -> None:
    with atomic_write(path) as handle:
        cohort.truth.to_csv(handle, index=False, float_format="%.17g")
