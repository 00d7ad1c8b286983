from setmember.services.network.builder import build_graph, build_network
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
    stationary_vector,
    validate_weights,
    weights_max_degree,
    weights_metropolis,
    weights_neighbor_average,
    weights_uniform,
)

__all__ = [
    "Graph",
    "WeightMatrix",
    "build_complete",
    "build_from_edges",
    "build_graph",
    "build_network",
    "build_path",
    "build_ring",
    "build_star",
    "stationary_vector",
    "validate_weights",
    "weights_max_degree",
    "weights_metropolis",
    "weights_neighbor_average",
    "weights_uniform",
]
