import numpy as np
import pytest

from setmember.core.errors import (
    AsymmetricGraph,
    InvalidConfig,
    InvalidGraph,
    InvalidSize,
    NoConvergence,
)
from setmember.schemas.config import NetworkConfig
from setmember.schemas.validation import CHECK_NAMES
from setmember.services.network import (
    Graph,
    WeightMatrix,
    build_complete,
    build_from_edges,
    build_network,
    build_path,
    build_ring,
    build_star,
    stationary_vector,
    validate_weights,
    weights_max_degree,
    weights_metropolis,
    weights_neighbor_average,
    weights_uniform,
)


def linear_solve_stationary(entries):
    """Oracle: solve vᵀA = vᵀ with sum(v) = 1 directly."""
    N = entries.shape[0]
    system = np.vstack([entries.T - np.eye(N), np.ones(N)])
    rhs = np.concatenate([np.zeros(N), [1.0]])
    return np.linalg.lstsq(system, rhs, rcond=None)[0]


class TestGraphs:
    def test_bidirectional_ring(self):
        assert build_ring(3).edges == {(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)}

    def test_directed_pair(self):
        assert build_ring(2, bidirectional=False).edges == {(0, 1), (1, 0)}

    def test_ring_degrees(self):
        ring = build_ring(5)
        assert all(ring.in_degree(i) == 2 for i in range(5))

    @pytest.mark.parametrize("N, bidirectional", [(1, False), (2, True)])
    def test_ring_too_small(self, N, bidirectional):
        with pytest.raises(InvalidSize):
            build_ring(N, bidirectional=bidirectional)

    @pytest.mark.parametrize("N, edges", [(2, 2), (3, 6), (7, 42)])
    def test_complete_edge_count(self, N, edges):
        assert len(build_complete(N).edges) == edges

    def test_directed_ring_is_not_symmetric(self):
        assert not build_ring(4, bidirectional=False).is_symmetric
        assert build_ring(4).is_symmetric

    def test_self_loops_rejected(self):
        with pytest.raises(InvalidGraph):
            build_from_edges(2, [(0, 0)])

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(InvalidGraph):
            build_from_edges(2, [(0, 2)])

    def test_networkx_round_trip(self):
        star = build_star(5)
        assert Graph.from_networkx(star.to_networkx()) == star

    def test_strong_connectivity(self):
        assert build_path(4).is_strongly_connected
        assert not build_from_edges(3, [(0, 1), (1, 2)]).is_strongly_connected


class TestWeightBuilders:
    def test_neighbor_average_complete(self):
        np.testing.assert_allclose(weights_neighbor_average(build_complete(7)).entries, 1 / 7)

    @pytest.mark.parametrize("N", [3, 4, 9])
    def test_neighbor_average_ring(self, N):
        entries = weights_neighbor_average(build_ring(N)).entries
        np.testing.assert_allclose(entries[entries > 0], 1 / 3)

    def test_neighbor_average_pair(self):
        np.testing.assert_allclose(weights_uniform(build_complete(2)).entries, 0.5)

    def test_metropolis_ring(self):
        np.testing.assert_allclose(weights_metropolis(build_ring(3)).entries, 1 / 3)

    def test_metropolis_star(self):
        entries = weights_metropolis(build_star(4)).entries
        assert entries[1, 0] == pytest.approx(0.25)
        assert entries[1, 1] == pytest.approx(0.75)
        assert entries[0, 0] == pytest.approx(0.25)
        assert WeightMatrix(entries).is_doubly_stochastic()

    def test_metropolis_pair(self):
        np.testing.assert_allclose(weights_metropolis(build_complete(2)).entries, 0.5)

    def test_max_degree_ring(self):
        entries = weights_max_degree(build_ring(4)).entries
        np.testing.assert_allclose(entries[entries > 0], 1 / 3)
        np.testing.assert_allclose(np.diag(entries), 1 / 3)

    def test_max_degree_path(self):
        entries = weights_max_degree(build_path(3)).entries
        assert entries[0, 1] == pytest.approx(1 / 3)
        assert entries[0, 0] == pytest.approx(2 / 3)

    def test_max_degree_pair(self):
        np.testing.assert_allclose(weights_max_degree(build_complete(2)).entries, 0.5)

    @pytest.mark.parametrize("rule", [weights_metropolis, weights_max_degree])
    def test_symmetric_rules_reject_directed_graphs(self, rule):
        with pytest.raises(AsymmetricGraph):
            rule(build_ring(4, bidirectional=False))

    @pytest.mark.parametrize("graph", [build_path(6), build_star(5), build_ring(7)])
    def test_symmetric_rules_are_doubly_stochastic(self, graph):
        assert weights_metropolis(graph).is_doubly_stochastic()
        assert weights_max_degree(graph).is_doubly_stochastic()

    @pytest.mark.parametrize("graph", [build_ring(5), build_complete(4)])
    def test_rules_coincide_on_regular_graphs(self, graph):
        reference = weights_neighbor_average(graph).entries
        np.testing.assert_allclose(weights_metropolis(graph).entries, reference)
        np.testing.assert_allclose(weights_max_degree(graph).entries, reference)

    def test_non_square_matrix_rejected(self):
        with pytest.raises(InvalidGraph):
            WeightMatrix(np.ones((2, 3)))


class TestValidateWeights:
    @pytest.mark.parametrize(
        "graph",
        [
            build_ring(3),
            build_ring(6),
            build_ring(5, bidirectional=False),
            build_complete(4),
            build_path(5),
            build_star(6),
        ],
    )
    def test_builders_pass(self, graph):
        report = validate_weights(graph, weights_neighbor_average(graph))
        assert report.passed
        assert tuple(report.checks) == CHECK_NAMES
        if graph.is_symmetric:
            assert validate_weights(graph, weights_metropolis(graph))
            assert validate_weights(graph, weights_max_degree(graph))

    def test_zero_diagonal(self):
        entries = np.array([[0.0, 0.5, 0.5], [1 / 3, 1 / 3, 1 / 3], [1 / 3, 1 / 3, 1 / 3]])
        report = validate_weights(build_ring(3), entries)
        assert not report
        assert report.violations == ["positive diagonal"]

    def test_disconnected_graph(self):
        graph = build_from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
        report = validate_weights(graph, weights_neighbor_average(graph))
        assert report.violations == ["strongly connected"]

    def test_row_sum_below_one(self):
        entries = np.full((3, 3), 0.3)
        report = validate_weights(build_ring(3), entries)
        assert report.violations == ["row-stochastic"]
        assert "row-stochastic" in report.details

    def test_weight_without_edge(self):
        graph = build_path(3)
        entries = weights_neighbor_average(graph).entries.copy()
        entries[0, 0] -= 0.1
        entries[0, 2] = 0.1
        report = validate_weights(graph, entries)
        assert report.violations == ["edge support"]

    def test_negative_weight(self):
        entries = np.array([[1.2, -0.2], [0.5, 0.5]])
        report = validate_weights(build_complete(2), entries)
        assert "nonnegative" in report.violations

    def test_dimension_mismatch_stops_early(self):
        report = validate_weights(build_ring(3), np.eye(2))
        assert report.violations == ["dimensions"]
        assert list(report.checks) == ["dimensions"]


class TestStationaryVector:
    @pytest.mark.parametrize("graph", [build_ring(5), build_star(4), build_path(6)])
    def test_doubly_stochastic_gives_uniform(self, graph):
        v = stationary_vector(weights_metropolis(graph))
        np.testing.assert_allclose(v, np.full(graph.node_count, 1 / graph.node_count), atol=1e-10)

    def test_cyclic_three_node_matrix(self):
        entries = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
        v = stationary_vector(entries)
        np.testing.assert_allclose(v, linear_solve_stationary(entries), atol=1e-8)
        np.testing.assert_allclose(v, 1 / 3, atol=1e-8)

    def test_single_node(self):
        np.testing.assert_allclose(stationary_vector(np.array([[1.0]])), [1.0])

    @pytest.mark.parametrize("graph", [build_star(5), build_path(4), build_ring(6, bidirectional=False)])
    def test_non_uniform_fixed_point(self, graph):
        A = weights_neighbor_average(graph)
        v = stationary_vector(A)
        assert np.all(v > 0)
        assert v.sum() == pytest.approx(1.0, abs=1e-10)
        assert np.max(np.abs(v @ A.entries - v)) <= 1e-8
        np.testing.assert_allclose(v, linear_solve_stationary(A.entries), atol=1e-8)

    def test_result_is_read_only(self):
        v = stationary_vector(weights_neighbor_average(build_ring(3)))
        assert not v.flags.writeable

    def test_iteration_cap(self):
        entries = weights_neighbor_average(build_star(5)).entries
        with pytest.raises(NoConvergence):
            stationary_vector(entries, tol=1e-16, max_iterations=2)


class TestBuildNetwork:
    def test_ring_config(self):
        graph, weights = build_network(NetworkConfig(topology="ring"), 5)
        assert graph == build_ring(5)
        assert validate_weights(graph, weights)

    def test_single_node_network(self):
        graph, weights = build_network(NetworkConfig(topology="ring"), 1)
        assert graph.edges == frozenset()
        np.testing.assert_array_equal(weights.entries, [[1.0]])

    def test_explicit_matrix(self):
        cfg = NetworkConfig(topology="complete", weights="explicit", matrix=[[0.5, 0.5], [0.5, 0.5]])
        _, weights = build_network(cfg, 2)
        np.testing.assert_array_equal(weights.entries, 0.5)

    def test_explicit_matrix_wrong_size(self):
        cfg = NetworkConfig(topology="complete", weights="explicit", matrix=[[1.0]])
        with pytest.raises(InvalidConfig):
            build_network(cfg, 3)

    def test_edge_list(self):
        cfg = NetworkConfig(topology="edges", edges=[(0, 1), (1, 2), (2, 0)])
        graph, weights = build_network(cfg, 3)
        assert not graph.is_symmetric
        assert validate_weights(graph, weights)
