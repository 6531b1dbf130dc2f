# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

from typing import Iterable, NamedTuple, Optional

import networkx as nx
import numpy as np

from fallrisk.featurize import FeatureDictionary
from fallrisk.jhfrat import SINGLE_SELECT_GROUPS
from fallrisk.preconditions import check_argument
from fallrisk.types import Int, List, Tuple


class ConstraintSet(NamedTuple):
    """
    Ordering constraints between coefficients, as disjoint chains of column
    indices. A chain ``(j1, j2, j3)`` requires
    ``beta[j1] <= beta[j2] <= beta[j3]``.
    """

    chains: Tuple[Tuple[int, ...], ...] = ()

    @property
    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        """
        Every ``(j, k)`` with ``beta[j] <= beta[k]`` between chain neighbours.
        """
        return tuple(
            (chain[t - 1], chain[t])
            for chain in self.chains
            for t in range(1, len(chain))
        )

    def increment_matrix(self, n_features: int) -> np.ndarray:
        """
        Matrix ``M`` with ``beta = M @ theta``: along a chain each coefficient is
        the running sum of non-negative increments, other coefficients are their
        own increment.

        >>> ConstraintSet(((0, 2),)).increment_matrix(3).astype(int).tolist()
        [[1, 0, 0], [0, 1, 0], [1, 0, 1]]
        """
        M = np.eye(n_features)
        for chain in self.chains:
            for t, row in enumerate(chain):
                for column in chain[:t]:
                    M[row, column] = 1.0
        return M

    def difference_matrix(self, n_features: int) -> np.ndarray:
        """
        Inverse of :meth:`increment_matrix`, ``theta = D @ beta``. Every
        constraint of the set, non-negativity included, is a row of
        ``D @ beta >= 0``.
        """
        D = np.eye(n_features)
        for chain in self.chains:
            for previous, current in zip(chain, chain[1:]):
                D[current, previous] = -1.0
        return D

    def to_names(self, names: Tuple[str, ...]) -> List[List[str]]:
        return [[names[j] for j in chain] for chain in self.chains]


def from_pairs(
    pairs: Iterable[Tuple[Int, Int]], n_features: Optional[int] = None
) -> ConstraintSet:
    """
    Builds a :class:`ConstraintSet` from ``(j, k)`` pairs meaning
    ``beta[j] <= beta[k]``.

    Parameters
    ----------
    pairs : Iterable[Tuple[int, int]]
        Ordering pairs over column indices
    n_features : int, optional
        If given, every index must be below it

    Returns
    -------
    constraints : ConstraintSet
        Chains ordered by their first column

    Raises
    ------
    ValueError
        If the pairs contain a cycle or a column with more than one direct
        predecessor or successor (only chains reduce to the non-negative
        orthant).

    Examples
    --------
    >>> from_pairs([(1, 2), (0, 1), (4, 5)]).chains
    ((0, 1, 2), (4, 5))
    """
    graph = nx.DiGraph()
    graph.add_edges_from((int(j), int(k)) for j, k in pairs)
    if n_features is not None:
        for node in graph.nodes:
            check_argument(
                0 <= node < n_features,
                f"constraint column {node} outside [0, {n_features})",
            )
    check_argument(
        nx.is_directed_acyclic_graph(graph),
        f"ordering constraints contain a cycle: {_cycle(graph)}",
    )
    for node in graph.nodes:
        check_argument(
            graph.in_degree(node) <= 1 and graph.out_degree(node) <= 1,
            f"column {node} appears in more than one ordering chain",
        )
    chains = []
    for component in nx.weakly_connected_components(graph):
        chain = tuple(nx.topological_sort(graph.subgraph(component)))
        chains.append(chain)
    return ConstraintSet(tuple(sorted(chains)))


def _cycle(graph: nx.DiGraph) -> List[Tuple[int, int]]:
    try:
        return [(u, v) for u, v in nx.find_cycle(graph)]
    except nx.NetworkXNoCycle:
        return []


def check_constraints(constraints: ConstraintSet, n_features: int) -> None:
    """
    Validates that ``constraints`` are disjoint acyclic chains over existing
    columns.
    """
    rebuilt = from_pairs(constraints.pairs, n_features)
    check_argument(
        rebuilt.chains == tuple(sorted(c for c in constraints.chains if len(c) > 1)),
        "constraint chains must be disjoint and listed without repeats",
    )


def default_constraints(dictionary: FeatureDictionary) -> ConstraintSet:
    """
    Chains preserving the clinical ordering of the single-select JHFRAT
    categories (Age, Medications, Patient Care Equipment).

    >>> from fallrisk.featurize import build_dictionary
    >>> default_constraints(build_dictionary(augmented=False)).chains
    ((0, 1, 2), (8, 9, 10), (12, 13, 14))
    """
    pairs = []
    for members in SINGLE_SELECT_GROUPS.values():
        columns = [dictionary.position(name) for name in members]
        pairs.extend(zip(columns, columns[1:]))
    return from_pairs(pairs, dictionary.n_features)
