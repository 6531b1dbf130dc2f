# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from fallrisk.cohort import (
    AssessmentRecord,
    Cohort,
    Demographics,
    Encounter,
    LabelingPolicy,
    build_cohort,
)
from fallrisk.simulations import SynthConfig, generate


def demographics(**overrides):
    values = dict(
        age_years=70,
        sex="female",
        race="white",
        service="medicine",
        comorbidity_count=3,
    )
    values.update(overrides)
    return Demographics(**values)


def make_encounter(
    eid="e1",
    targeted=(0, 0, 0, 0),
    nontargeted=None,
    items=(),
    n_assessments=None,
    fall_day=None,
    jhhlm=None,
    ampac=None,
    hospital="hospital_a",
    **demographic_overrides,
):
    """
    An encounter with one assessment per day (at least three) flagging the
    same ``items``.
    """
    length = len(targeted)
    if nontargeted is None:
        nontargeted = [frozenset()] * length
    if n_assessments is None:
        n_assessments = max(3, length)
    assessments = tuple(
        AssessmentRecord(
            day=min(length, 1 + i * length // n_assessments),
            jhfrat_items=frozenset(items),
            jhhlm=jhhlm,
            ampac=ampac,
        )
        for i in range(n_assessments)
    )
    return Encounter(
        id=eid,
        hospital=hospital,
        admit_length_days=length,
        daily_targeted=tuple(int(c) for c in targeted),
        daily_nontargeted=tuple(frozenset(k) for k in nontargeted),
        assessments=assessments,
        demographics=demographics(**demographic_overrides),
        fall_day=fall_day,
    )


def random_counts(rng, max_days=10, max_count=8):
    length = int(rng.integers(2, max_days + 1))
    # mix quiet, busy and arbitrary days so all three labels occur
    regime = rng.integers(3)
    if regime == 0:
        return rng.integers(0, 2, size=length)
    if regime == 1:
        return rng.integers(1, max_count + 1, size=length)
    return rng.integers(0, max_count + 1, size=length)


def brute_force_label(counts, policy=LabelingPolicy()):
    """
    Labels a count series by enumerating every stretch of consecutive windows.
    """
    counts = [int(c) for c in counts]
    n = len(counts)
    if policy.edge_doubling and n == 1:
        padded = counts * 2
        days = [1, 1]
    elif policy.edge_doubling:
        padded = [counts[0]] + counts + [counts[-1]]
        days = [1] + list(range(1, n + 1)) + [n]
    else:
        padded = counts
        days = list(range(1, n + 1))
    width = policy.window_days
    totals = [sum(padded[i : i + width]) for i in range(len(padded) - width + 1)]
    firsts = [days[i] for i in range(len(totals))]
    lasts = [days[i + width - 1] for i in range(len(totals))]
    needed = math.ceil(Fraction(policy.stretch_fraction) * n)

    def qualifies(accept):
        for i in range(len(totals)):
            for j in range(i, len(totals)):
                if not all(accept(t) for t in totals[i : j + 1]):
                    break
                if lasts[j] - firsts[i] + 1 >= needed:
                    return True
        return False

    low = qualifies(lambda t: t <= policy.low_max_per_window)
    high = qualifies(lambda t: t >= policy.high_min_per_window)
    if low and not high:
        return "Low"
    if high and not low:
        return "High"
    return "Indeterminate"


def random_problem(rng, n=200, m=2, scale=1.0):
    """
    Binary features, labels from a noisy additive score and both classes
    present.
    """
    X = (rng.random((n, m)) < 0.5).astype(float)
    weights = rng.uniform(2.0, 10.0, size=m) * scale
    logits = X @ weights - weights.sum() / 2.0
    y = (rng.random(n) < 1.0 / (1.0 + np.exp(-logits / 3.0))).astype(int)
    y[0], y[1] = 0, 1
    return X, y


@lru_cache(maxsize=None)
def synthetic_encounters(n=1500, seed=3):
    return generate(SynthConfig(n_encounters=n, seed=seed)).encounters


@lru_cache(maxsize=None)
def synthetic_cohort(n=1500, seed=3) -> Cohort:
    return build_cohort(synthetic_encounters(n, seed))
