# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import Any, Mapping, NamedTuple, Optional

import numpy as np
from sklearn.utils import check_scalar
from typing_extensions import Literal

from fallrisk.featurize import FeatureDictionary
from fallrisk.jhfrat import HIGH_THRESHOLD, JHFRAT_POINTS, LOW_THRESHOLD
from fallrisk.preconditions import InvalidInputError, check_argument, check_input
from fallrisk.types import Dict, SolverMethod, Tuple

from .constraints import ConstraintSet, default_constraints, from_pairs

InitName = Literal["jhfrat", "zeros"]


class FitConfig(NamedTuple):
    """
    Settings of the constrained score optimization.

    Parameters
    ----------
    lambda_ : float (default=0.5)
        Weight of the log-likelihood at the low threshold; the high threshold
        gets ``1 - lambda_``.
    thresholds : Tuple[float, float] (default=(6, 13))
        Low and high category thresholds the scores are calibrated against.
    tol : float (default=1e-8)
        Stop once the projected gradient norm, or the relative objective
        improvement, falls below this.
    max_iter : int (default=1_000_000)
        Iteration cap.
    method : {"newton", "gradient"} (default="newton")
        Projected Newton or spectral projected gradient ascent over the chain
        increments.
    init : {"jhfrat", "zeros"} (default="jhfrat")
        Start from the published JHFRAT points (EHR columns at zero) or from
        all zeros. Without a feature dictionary the start is always zero.
    armijo : float (default=1e-4)
        Sufficient increase constant of the backtracking line search.
    backtrack : float (default=0.5)
        Step shrink factor of the line search.
    max_backtracks : int (default=60)
        Line search attempts per iteration.
    """

    lambda_: float = 0.5
    thresholds: Tuple[float, float] = (LOW_THRESHOLD, HIGH_THRESHOLD)
    tol: float = 1e-8
    max_iter: int = 1_000_000
    method: SolverMethod = "newton"
    init: InitName = "jhfrat"
    armijo: float = 1e-4
    backtrack: float = 0.5
    max_backtracks: int = 60


def check_fit_config(config: FitConfig) -> None:
    check_scalar(
        config.lambda_, name="lambda_", target_type=(int, float), min_val=0, max_val=1
    )
    check_scalar(
        config.tol,
        name="tol",
        target_type=(int, float),
        min_val=0,
        include_boundaries="neither",
    )
    check_scalar(config.max_iter, name="max_iter", target_type=int, min_val=1)
    check_scalar(
        config.armijo,
        name="armijo",
        target_type=float,
        min_val=0,
        max_val=1,
        include_boundaries="neither",
    )
    check_scalar(
        config.backtrack,
        name="backtrack",
        target_type=float,
        min_val=0,
        max_val=1,
        include_boundaries="neither",
    )
    check_scalar(
        config.max_backtracks, name="max_backtracks", target_type=int, min_val=1
    )
    low, high = config.thresholds
    check_argument(
        low < high, f"thresholds must be increasing, got {config.thresholds}"
    )
    check_argument(
        config.method in ("newton", "gradient"),
        f"method must be 'newton' or 'gradient', got {config.method!r}",
    )
    check_argument(
        config.init in ("jhfrat", "zeros"),
        f"init must be 'jhfrat' or 'zeros', got {config.init!r}",
    )


class KKTReport(NamedTuple):
    """
    Magnitudes of the first-order optimality residuals (infinity norms).

    ``stationarity`` is the part of the objective gradient that no
    non-negative combination of active constraints balances, ``primal`` the
    largest constraint violation and ``complementary`` the largest
    multiplier-times-slack product.
    """

    stationarity: float
    primal: float
    complementary: float

    @property
    def max_residual(self) -> float:
        return max(self.stationarity, self.primal, self.complementary)


class FitMetadata(NamedTuple):
    lambda_: float
    method: SolverMethod
    iterations: int
    objective: float
    converged: bool
    kkt: KKTReport
    projected_gradient: float
    non_unique: bool = False
    condition_number: float = 1.0
    trace: Tuple[float, ...] = ()
    """
    Objective after every accepted iteration, starting with the initial point.
    """

    def to_dict(self) -> Dict[str, Any]:
        payload = self._asdict()
        payload["kkt"] = self.kkt._asdict()
        del payload["trace"]
        return payload

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "FitMetadata":
        values = dict(payload)
        values["kkt"] = KKTReport(**values["kkt"])
        # JSON has no infinity
        if values.get("condition_number", 1.0) is None:
            values["condition_number"] = float("inf")
        return cls(**values)


class ScoreModel(NamedTuple):
    """
    An additive risk score: ``score = X @ beta``, banded by two thresholds.

    Attributes
    ----------
    beta : np.ndarray, shape (m,)
        Non-negative coefficients
    dictionary : FeatureDictionary or None
        Column layout the coefficients refer to
    thresholds : Tuple[float, float]
        Category thresholds
    constraints : ConstraintSet
        Ordering constraints the fit honoured
    metadata : FitMetadata or None
        Solver report; None for fixed-coefficient models
    """

    beta: np.ndarray
    dictionary: Optional[FeatureDictionary]
    thresholds: Tuple[float, float] = (LOW_THRESHOLD, HIGH_THRESHOLD)
    constraints: ConstraintSet = ConstraintSet()
    metadata: Optional[FitMetadata] = None

    @property
    def feature_names(self) -> Tuple[str, ...]:
        if self.dictionary is not None:
            return self.dictionary.names
        return tuple(f"x{j}" for j in range(len(self.beta)))

    def coefficients(self) -> Dict[str, float]:
        return {
            name: float(value) for name, value in zip(self.feature_names, self.beta)
        }

    def is_feasible(self, tol: float = 1e-8) -> bool:
        """
        True when ``beta >= -tol`` and every chain holds within ``tol``.
        """
        if np.any(self.beta < -tol):
            return False
        return all(
            self.beta[j] <= self.beta[k] + tol for j, k in self.constraints.pairs
        )

    def to_dict(self) -> Dict[str, Any]:
        names = self.feature_names
        return {
            "beta": self.coefficients(),
            "constraints": self.constraints.to_names(names),
            "dictionary": (
                None if self.dictionary is None else self.dictionary.to_dict()
            ),
            "dictionary_digest": (
                None if self.dictionary is None else self.dictionary.digest()
            ),
            "metadata": None if self.metadata is None else self.metadata.to_dict(),
            "thresholds": list(self.thresholds),
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "ScoreModel":
        """
        Rebuilds a model from :meth:`to_dict` output.

        Raises
        ------
        InvalidInputError
            If the dictionary digest does not match, coefficients are missing or
            the model is infeasible.
        """
        try:
            dictionary = (
                None
                if payload.get("dictionary") is None
                else FeatureDictionary.from_dict(payload["dictionary"])
            )
            if dictionary is not None:
                check_input(
                    payload.get("dictionary_digest") == dictionary.digest(),
                    "model dictionary digest does not match its dictionary",
                )
                names = dictionary.names
            else:
                names = tuple(payload["beta"].keys())
            check_input(
                set(payload["beta"]) == set(names),
                "model coefficients do not match its feature names",
            )
            beta = np.array([float(payload["beta"][name]) for name in names])
            position = {name: j for j, name in enumerate(names)}
            pairs = [
                (position[a], position[b])
                for chain in payload.get("constraints", [])
                for a, b in zip(chain, chain[1:])
            ]
            low, high = payload.get("thresholds", (LOW_THRESHOLD, HIGH_THRESHOLD))
            metadata = payload.get("metadata")
            model = cls(
                beta=beta,
                dictionary=dictionary,
                thresholds=(float(low), float(high)),
                constraints=from_pairs(pairs, len(names)),
                metadata=None if metadata is None else FitMetadata.from_dict(metadata),
            )
        except (KeyError, TypeError, ValueError) as error:
            if isinstance(error, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed score model: {error}") from error
        check_input(model.is_feasible(), "model coefficients violate its constraints")
        return model


def jhfrat_coefficients(dictionary: FeatureDictionary) -> np.ndarray:
    """
    Published JHFRAT points in the column order of ``dictionary``, zero for EHR
    columns.
    """
    return np.array(
        [float(JHFRAT_POINTS.get(name, 0)) for name in dictionary.names], dtype=float
    )


def baseline_model(dictionary: FeatureDictionary) -> ScoreModel:
    """
    The fixed-coefficient JHFRAT score as a :class:`ScoreModel`.

    >>> from fallrisk.featurize import build_dictionary
    >>> float(baseline_model(build_dictionary()).beta.sum())
    49.0
    """
    return ScoreModel(
        beta=jhfrat_coefficients(dictionary),
        dictionary=dictionary,
        constraints=default_constraints(dictionary),
    )
