"""
Consensus weight matrices, their validation, and the stationary vector.

Row i of the matrix holds the weights node i applies to its own estimate
and to the estimates received over its in-edges (j, i).
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from setmember.core.config import POWER_ITERATION_CAP, POWER_ITERATION_TOL
from setmember.core.errors import AsymmetricGraph, InvalidGraph, NoConvergence
from setmember.schemas.validation import WeightReport
from setmember.services.network.graph import Graph

logger = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidGraph("weight matrix must be square", shape=entries.shape)
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0)

    def is_doubly_stochastic(self, tol: float = ROW_SUM_TOL) -> bool:
        return bool(
            np.all(np.abs(self.row_sums() - 1.0) <= tol)
            and np.all(np.abs(self.column_sums() - 1.0) <= tol)
        )


def weights_neighbor_average(g: Graph) -> WeightMatrix:
    """a_ij = 1 / (d_i + 1) for i itself and each in-neighbor j."""
    entries = np.zeros((g.node_count, g.node_count))
    for i in range(g.node_count):
        neighbors = g.in_neighbors(i)
        share = 1.0 / (len(neighbors) + 1)
        entries[i, i] = share
        entries[i, list(neighbors)] = share
    return WeightMatrix(entries)


weights_uniform = weights_neighbor_average


def _require_symmetric(g: Graph, rule: str) -> None:
    if not g.is_symmetric:
        raise AsymmetricGraph(f"{rule} weights need a symmetric graph")


def weights_metropolis(g: Graph) -> WeightMatrix:
    """Metropolis-Hastings: a_ij = 1 / (1 + max(d_i, d_j)) on edges; doubly stochastic."""
    _require_symmetric(g, "Metropolis")
    entries = np.zeros((g.node_count, g.node_count))
    for i in range(g.node_count):
        for j in g.in_neighbors(i):
            entries[i, j] = 1.0 / (1 + max(g.in_degree(i), g.in_degree(j)))
        entries[i, i] = 1.0 - entries[i].sum()
    return WeightMatrix(entries)


def weights_max_degree(g: Graph) -> WeightMatrix:
    """a_ij = 1 / (d_max + 1) on edges, a_ii = 1 - d_i / (d_max + 1); doubly stochastic."""
    _require_symmetric(g, "maximum-degree")
    d_max = max(g.in_degree(i) for i in range(g.node_count))
    share = 1.0 / (d_max + 1)
    entries = np.zeros((g.node_count, g.node_count))
    for i in range(g.node_count):
        entries[i, list(g.in_neighbors(i))] = share
        entries[i, i] = 1.0 - g.in_degree(i) * share
    return WeightMatrix(entries)


def validate_weights(g: Graph, A: Union[WeightMatrix, np.ndarray]) -> WeightReport:
    """
    Check the consensus assumptions: nonnegative weights, positive diagonal,
    off-diagonal support equal to the in-edges, unit row sums, and a strongly
    connected graph. The report is truthy iff every check passes.
    """
    entries = A.entries if isinstance(A, WeightMatrix) else np.asarray(A, dtype=float)
    report = WeightReport()

    N = g.node_count
    if entries.shape != (N, N):
        report.record(
            "dimensions", False, f"matrix shape {entries.shape} does not match N={N}"
        )
        return report
    report.record("dimensions", True)

    negative = np.argwhere(entries < 0)
    report.record(
        "nonnegative",
        negative.size == 0,
        f"negative weight at {negative[0].tolist()}" if negative.size else "",
    )

    diagonal = np.diag(entries)
    bad_diagonal = np.flatnonzero(diagonal <= 0)
    report.record(
        "positive diagonal",
        bad_diagonal.size == 0,
        f"a_ii <= 0 for nodes {bad_diagonal.tolist()}" if bad_diagonal.size else "",
    )

    support = entries > 0
    np.fill_diagonal(support, False)
    expected = np.zeros((N, N), dtype=bool)
    for j, i in g.edges:
        expected[i, j] = True
    mismatch = np.argwhere(support != expected)
    report.record(
        "edge support",
        mismatch.size == 0,
        f"a_ij > 0 must match edge (j, i); first mismatch at (i, j) = {mismatch[0].tolist()}"
        if mismatch.size
        else "",
    )

    row_error = np.abs(entries.sum(axis=1) - 1.0)
    report.record(
        "row-stochastic",
        bool(np.all(row_error <= ROW_SUM_TOL)),
        f"row sums deviate from 1 by up to {row_error.max():.3g}",
    )

    report.record(
        "strongly connected",
        g.is_strongly_connected,
        "some node cannot reach every other node",
    )
    return report


def stationary_vector(
    A: Union[WeightMatrix, np.ndarray],
    tol: float = POWER_ITERATION_TOL,
    max_iterations: int = POWER_ITERATION_CAP,
) -> np.ndarray:
    """
    Positive left eigenvector v of A for eigenvalue 1, normalized to sum 1.

    Computed by power iteration on Aᵀ starting from the uniform vector, so a
    doubly stochastic matrix returns the uniform vector immediately. Stops
    when ||vᵀA - vᵀ||_inf <= tol.

    Raises:
        NoConvergence: If the iteration cap is reached.
        InvalidGraph: If the limit is not strictly positive (reducible matrix).
    """
    entries = A.entries if isinstance(A, WeightMatrix) else np.asarray(A, dtype=float)
    transposed = entries.T
    N = entries.shape[0]
    v = np.full(N, 1.0 / N)
    for iteration in range(max_iterations + 1):
        nxt = transposed @ v
        if np.max(np.abs(nxt - v)) <= tol:
            break
        v = nxt / nxt.sum()
    else:
        raise NoConvergence(
            "power iteration for the stationary vector did not converge",
            iterations=max_iterations,
        )

    if np.any(v <= 0):
        raise InvalidGraph("stationary vector is not strictly positive")
    logger.debug("Stationary vector converged after %d iterations", iteration)
    v = v.copy()
    v.flags.writeable = False
    return v
