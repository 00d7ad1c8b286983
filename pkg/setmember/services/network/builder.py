from typing import Callable, Dict, Tuple

from setmember.core.errors import InvalidConfig
from setmember.schemas.config import NetworkConfig
from setmember.services.network.graph import (
    Graph,
    build_complete,
    build_from_edges,
    build_path,
    build_ring,
    build_star,
)
from setmember.services.network.weights import (
    WeightMatrix,
    weights_max_degree,
    weights_metropolis,
    weights_neighbor_average,
)

WEIGHT_RULES: Dict[str, Callable[[Graph], WeightMatrix]] = {
    "neighbor-average": weights_neighbor_average,
    "metropolis": weights_metropolis,
    "max-degree": weights_max_degree,
}


def build_graph(cfg: NetworkConfig, N: int) -> Graph:
    """Graph on N nodes described by the config `network` section."""
    if N == 1 and cfg.topology != "edges":
        return build_from_edges(1, [])
    if cfg.topology == "ring":
        return build_ring(N, bidirectional=cfg.bidirectional)
    if cfg.topology == "complete":
        return build_complete(N)
    if cfg.topology == "path":
        return build_path(N)
    if cfg.topology == "star":
        return build_star(N)
    return build_from_edges(N, cfg.edges or [])


def build_network(cfg: NetworkConfig, N: int) -> Tuple[Graph, WeightMatrix]:
    """Graph and weight matrix for N nodes. Explicit matrices are not validated here."""
    graph = build_graph(cfg, N)
    if cfg.weights == "explicit":
        weights = WeightMatrix(cfg.matrix)
        if weights.size != N:
            raise InvalidConfig(
                "explicit weight matrix does not match the node count",
                N=N,
                size=weights.size,
            )
        return graph, weights
    return graph, WEIGHT_RULES[cfg.weights](graph)
