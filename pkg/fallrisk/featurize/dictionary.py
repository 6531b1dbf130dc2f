# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import hashlib
import json
from typing import Any, Mapping, NamedTuple, Optional

from typing_extensions import Literal

from fallrisk.cohort import RACES, SERVICES, SEXES
from fallrisk.jhfrat import JHFRAT_ITEMS, SINGLE_SELECT_GROUPS
from fallrisk.preconditions import InvalidInputError, check_input
from fallrisk.types import Dict, List, Tuple

FeatureSource = Literal["jhfrat", "ehr"]
FeatureKind = Literal["averaged", "indicator"]

AMPAC_BINS: Tuple[str, ...] = (
    "ampac_le_25",
    "ampac_25_35",
    "ampac_35_45",
    "ampac_gt_45",
)
JHHLM_BINS: Tuple[str, ...] = ("jhhlm_1_3", "jhhlm_4_5", "jhhlm_6_8")
COMORBIDITY_BINS: Tuple[str, ...] = (
    "comorbidities_lt_5",
    "comorbidities_5_10",
    "comorbidities_gt_10",
)
SEX_COLUMNS: Tuple[str, ...] = tuple(f"sex_{sex}" for sex in SEXES)
RACE_COLUMNS: Tuple[str, ...] = tuple(f"race_{race}" for race in RACES)
SERVICE_COLUMNS: Tuple[str, ...] = tuple(f"service_{service}" for service in SERVICES)

# one-hot EHR groups in column order
EHR_GROUPS: Tuple[Tuple[str, Tuple[str, ...]], ...] = (
    ("AMPAC", AMPAC_BINS),
    ("JHHLM", JHHLM_BINS),
    ("Comorbidities", COMORBIDITY_BINS),
    ("Sex", SEX_COLUMNS),
    ("Race", RACE_COLUMNS),
    ("Service", SERVICE_COLUMNS),
)


class FeatureSpec(NamedTuple):
    name: str
    source: FeatureSource
    category: str
    kind: FeatureKind
    group: Optional[str] = None
    """
    Single-select (JHFRAT) or one-hot (EHR) group the column belongs to.
    """


class FeatureDictionary(NamedTuple):
    """
    Ordered description of the columns of a feature matrix.

    The 18 JHFRAT items always come first, in catalog order, followed by the
    EHR indicator groups when the dictionary is augmented.
    """

    features: Tuple[FeatureSpec, ...]

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(spec.name for spec in self.features)

    @property
    def augmented(self) -> bool:
        return any(spec.source == "ehr" for spec in self.features)

    @property
    def n_features(self) -> int:
        return len(self.features)

    def position(self, name: str) -> int:
        """
        Column position of ``name``.

        >>> build_dictionary(augmented=False).position("fall_history")
        11
        """
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown feature {name!r}") from None

    def columns(self, source: FeatureSource) -> List[int]:
        return [i for i, spec in enumerate(self.features) if spec.source == source]

    def groups(self) -> Dict[str, List[str]]:
        """
        Group name to member names, in column order.
        """
        grouped: Dict[str, List[str]] = {}
        for spec in self.features:
            if spec.group is not None:
                grouped.setdefault(spec.group, []).append(spec.name)
        return grouped

    def to_dict(self) -> Dict[str, Any]:
        return {"features": [spec._asdict() for spec in self.features]}

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "FeatureDictionary":
        """
        Rebuilds and validates a dictionary from :meth:`to_dict` output.

        Raises
        ------
        InvalidInputError
            If names repeat or the JHFRAT items are not the leading columns.
        """
        try:
            specs = tuple(FeatureSpec(**spec) for spec in payload["features"])
        except (KeyError, TypeError) as error:
            raise InvalidInputError(
                f"malformed feature dictionary: {error}"
            ) from error
        dictionary = cls(specs)
        check_dictionary(dictionary)
        return dictionary

    def digest(self) -> str:
        """
        SHA-256 of the canonical JSON form; identifies the column layout a model
        was fitted on.
        """
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _jhfrat_group(name: str) -> Optional[str]:
    for group, members in SINGLE_SELECT_GROUPS.items():
        if name in members:
            return group
    return None


def build_dictionary(augmented: bool = True) -> FeatureDictionary:
    """
    Builds the feature dictionary.

    Parameters
    ----------
    augmented : bool (default=True)
        Append the binned EHR indicators to the 18 JHFRAT items.

    Returns
    -------
    dictionary : FeatureDictionary
        18 columns, or 40 when augmented.

    Examples
    --------
    >>> build_dictionary(augmented=False).n_features, build_dictionary().n_features
    (18, 40)
    """
    specs = [
        FeatureSpec(
            item.name, "jhfrat", item.category, "averaged", _jhfrat_group(item.name)
        )
        for item in JHFRAT_ITEMS
    ]
    if augmented:
        for group, names in EHR_GROUPS:
            specs.extend(
                FeatureSpec(name, "ehr", group, "indicator", group) for name in names
            )
    return FeatureDictionary(tuple(specs))


def check_dictionary(dictionary: FeatureDictionary) -> None:
    names = dictionary.names
    check_input(len(set(names)) == len(names), "feature names must be unique")
    leading = tuple(item.name for item in JHFRAT_ITEMS)
    check_input(
        names[: len(leading)] == leading,
        "the 18 JHFRAT items must be the leading columns, in catalog order",
    )
