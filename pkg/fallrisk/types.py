# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

"""
This module includes common fallrisk type hint declarations.
"""

import sys
from typing import Optional, Union

import numpy as np
from typing_extensions import Literal

# PEP 484 & PEP 585: mypy only honours the builtins re-export when it is
# guarded by a literal `sys.version_info` check.
if sys.version_info >= (3, 9):
    from builtins import dict as Dict
    from builtins import frozenset as FrozenSet
    from builtins import list as List
    from builtins import set as Set
    from builtins import tuple as Tuple
else:
    from typing import Dict, FrozenSet, List, Set, Tuple

Int = Union[int, np.integer]

Scalar = Union[int, float, np.integer, np.floating]

RngType = Optional[Union[int, np.integer, np.random.Generator]]

RiskLabelName = Literal["Low", "High", "Indeterminate"]

CategoryName = Literal["Low", "Moderate", "High"]

SolverMethod = Literal["newton", "gradient"]

__all__ = [
    "CategoryName",
    "Dict",
    "FrozenSet",
    "Int",
    "List",
    "RiskLabelName",
    "RngType",
    "Scalar",
    "Set",
    "SolverMethod",
    "Tuple",
]
