"""
Communication graphs.

An edge (j, i) means "node j sends its estimate to node i"; the consensus
weight a_ij attached to it multiplies x_j in node i's average. Nodes are
numbered 0 .. N-1.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Tuple

import networkx

from setmember.core.errors import InvalidGraph, InvalidSize

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: FrozenSet[Edge]
    _in_neighbors: Tuple[Tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        if self.node_count < 1:
            raise InvalidSize("a graph needs at least one node", N=self.node_count)
        edges = frozenset((int(j), int(i)) for j, i in self.edges)
        for j, i in edges:
            if j == i:
                raise InvalidGraph("self-loops are implicit and must not be listed", node=i)
            if not (0 <= j < self.node_count and 0 <= i < self.node_count):
                raise InvalidGraph("edge endpoint out of range", edge=[j, i])
        incoming = [[] for _ in range(self.node_count)]
        for j, i in edges:
            incoming[i].append(j)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(
            self, "_in_neighbors", tuple(tuple(sorted(row)) for row in incoming)
        )

    @classmethod
    def from_networkx(cls, graph: networkx.DiGraph) -> "Graph":
        return cls(graph.number_of_nodes(), frozenset(graph.edges()))

    def to_networkx(self) -> networkx.DiGraph:
        graph = networkx.DiGraph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(self.edges)
        return graph

    def in_neighbors(self, i: int) -> Tuple[int, ...]:
        return self._in_neighbors[i]

    def in_degree(self, i: int) -> int:
        return len(self._in_neighbors[i])

    @property
    def is_symmetric(self) -> bool:
        return all((i, j) in self.edges for j, i in self.edges)

    @property
    def is_strongly_connected(self) -> bool:
        return networkx.is_strongly_connected(self.to_networkx())


def build_ring(N: int, bidirectional: bool = True) -> Graph:
    """
    Directed cycle 0 -> 1 -> ... -> N-1 -> 0, plus the reversed edges when
    bidirectional (each node then averages itself and two neighbors).
    """
    if N < 2 or (bidirectional and N < 3):
        raise InvalidSize(
            "ring needs N >= 2 (N >= 3 when bidirectional)",
            N=N,
            bidirectional=bidirectional,
        )
    cycle = networkx.cycle_graph(N, create_using=networkx.DiGraph)
    if bidirectional:
        cycle.add_edges_from([(i, j) for j, i in list(cycle.edges())])
    return Graph.from_networkx(cycle)


def build_complete(N: int) -> Graph:
    if N < 2:
        raise InvalidSize("complete graph needs N >= 2", N=N)
    return Graph.from_networkx(networkx.complete_graph(N, create_using=networkx.DiGraph))


def build_path(N: int) -> Graph:
    """Symmetric path 0 - 1 - ... - N-1."""
    if N < 2:
        raise InvalidSize("path needs N >= 2", N=N)
    return Graph.from_networkx(networkx.path_graph(N).to_directed())


def build_star(N: int) -> Graph:
    """Symmetric star with center 0 and N-1 leaves."""
    if N < 2:
        raise InvalidSize("star needs N >= 2", N=N)
    return Graph.from_networkx(networkx.star_graph(N - 1).to_directed())


def build_from_edges(N: int, edges: Iterable[Edge]) -> Graph:
    return Graph(N, frozenset(tuple(edge) for edge in edges))
