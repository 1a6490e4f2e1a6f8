"""Partition Pauli Hamiltonian terms into mutually commuting clusters.

Clusters are the color classes of a proper coloring of the anticommutation
graph.  The sequential greedy strategies run directly on the adjacency
matrix; DSATUR is delegated to :func:`networkx.greedy_color`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .pauli import commutes
from .syk import PauliHamiltonian

__all__ = [
    "Cluster",
    "CommutationGraph",
    "STRATEGIES",
    "anticommutation_matrix",
    "build_commutation_graph",
    "partition_commuting",
    "check_partition",
    "partition_to_json",
    "partition_from_json",
]


@dataclass(frozen=True)
class Cluster:
    term_indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.term_indices)

    def __iter__(self):
        return iter(self.term_indices)


@dataclass(frozen=True)
class CommutationGraph:
    """Anticommutation graph: an edge joins every pair of anticommuting terms."""

    adjacency: np.ndarray

    @property
    def m(self) -> int:
        return len(self.adjacency)

    @property
    def edges(self) -> frozenset:
        i, j = np.nonzero(np.triu(self.adjacency, k=1))
        return frozenset(zip(i.tolist(), j.tolist()))

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.m else 0

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.m))
        g.add_edges_from(sorted(self.edges))
        return g


def anticommutation_matrix(x: np.ndarray, z: np.ndarray, x2=None, z2=None) -> np.ndarray:
    """Boolean matrix ``A[i, j]`` = rows ``i`` and ``j`` anticommute."""
    if x2 is None:
        x2, z2 = x, z
    # int32 accumulators: bits are tiny, so exact; parity of the symplectic form
    form = x.astype(np.int32) @ z2.T.astype(np.int32) + z.astype(np.int32) @ x2.T.astype(np.int32)
    return (form & 1).astype(bool)


def build_commutation_graph(h: PauliHamiltonian) -> CommutationGraph:
    if len(h) == 0:
        return CommutationGraph(np.zeros((0, 0), dtype=bool))
    x, z = h.symplectic()
    return CommutationGraph(anticommutation_matrix(x, z))


def _greedy(adjacency: np.ndarray, order) -> np.ndarray:
    """Sequential greedy coloring: each vertex takes the lowest free color."""
    m = len(adjacency)
    colors = np.full(m, -1, dtype=np.int64)
    for v in order:
        used = colors[adjacency[v]]
        taken = np.zeros(m + 1, dtype=bool)
        taken[used[used >= 0]] = True
        colors[v] = int(np.argmin(taken))
    return colors


def _largest_first(graph: CommutationGraph) -> np.ndarray:
    # stable sort keeps ascending index among equal degrees
    order = np.argsort(-graph.degrees, kind="stable")
    return _greedy(graph.adjacency, order)


def _input_order(graph: CommutationGraph) -> np.ndarray:
    return _greedy(graph.adjacency, range(graph.m))


def _dsatur(graph: CommutationGraph) -> np.ndarray:
    coloring = nx.greedy_color(graph.to_networkx(), strategy="saturation_largest_first")
    return np.array([coloring[v] for v in range(graph.m)], dtype=np.int64)


STRATEGIES = {
    "largest_first": _largest_first,
    "input_order": _input_order,
    "dsatur": _dsatur,
}


def partition_commuting(
    h: PauliHamiltonian,
    strategy: str = "largest_first",
    graph: CommutationGraph | None = None,
) -> list[Cluster]:
    """Greedy-color the anticommutation graph; each color class is a cluster.

    ``largest_first`` visits vertices by descending degree with ties broken
    by ascending index and gives each the lowest color not used by a
    neighbor.  Clusters come back ordered by color, indices ascending inside.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {sorted(STRATEGIES)}")
    if graph is None:
        graph = build_commutation_graph(h)
    if graph.m == 0:
        return []
    coloring = STRATEGIES[strategy](graph)
    return [
        Cluster(tuple(np.flatnonzero(coloring == c).tolist())) for c in np.unique(coloring)
    ]


def check_partition(h: PauliHamiltonian, clusters) -> None:
    """Raise ``ValueError`` unless ``clusters`` is a commuting partition of ``h``."""
    seen = sorted(i for cl in clusters for i in cl)
    if seen != list(range(len(h))):
        raise ValueError("clusters do not cover every term exactly once")
    ops = h.ops
    for cl in clusters:
        idx = list(cl)
        for a, i in enumerate(idx):
            for j in idx[a + 1:]:
                if not commutes(ops[i], ops[j]):
                    raise ValueError(f"terms {i} and {j} in one cluster anticommute")


def partition_to_json(clusters) -> str:
    return json.dumps({"clusters": [list(cl.term_indices) for cl in clusters]}) + "\n"


def partition_from_json(text: str) -> list[Cluster]:
    return [Cluster(tuple(c)) for c in json.loads(text)["clusters"]]
