"""
Estimator state shared by the three step rules.

Node estimates are never modified in place: every step stores new arrays,
so arrays handed out by `estimates()` stay valid snapshots.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Protocol, Sequence

import numpy as np

from setmember.core.errors import DimensionMismatch, InvalidGraph, ModeMismatch
from setmember.services.geometry import FeasibleSet, Slab, as_vector
from setmember.services.network import Graph, WeightMatrix, validate_weights


class Mode(str, Enum):
    INCREMENTAL_NSTEP = "incremental-nstep"
    INCREMENTAL_1STEP = "incremental-1step"
    DISTRIBUTED = "distributed"


@dataclass(frozen=True)
class MeasuredSet:
    """
    Measurement set M_i(k) of one node.

    `value` keeps the raw scalar measurement when the set comes from a
    regression sensor, so running min/max bookkeeping can be fed as well.
    """

    node: int
    instant: int
    region: FeasibleSet
    value: Optional[float] = None


class MeasurementSource(Protocol):
    """Anything that produces measurement sets per instant (e.g. a Scenario)."""

    @property
    def nodes(self) -> int: ...

    def measured_sets(
        self, instant: int, nodes: Optional[Sequence[int]] = None
    ) -> List[MeasuredSet]: ...


@dataclass
class NodeState:
    estimate: np.ndarray
    feasible_set: FeasibleSet


@dataclass
class EstimatorState:
    """
    Per-node estimates and local feasible sets plus the step bookkeeping.

    `carrier` is the node whose estimate the next incremental projection
    starts from; it begins at the last node, so x_0(1) = x_N(0).
    """

    nodes: List[NodeState]
    mode: Mode
    clock: int = 0
    active_index: int = 0
    weights: Optional[WeightMatrix] = None
    batched: bool = False
    carrier: int = -1
    pending: List[FeasibleSet] = field(default_factory=list)

    @classmethod
    def create(
        cls,
        mode: Mode,
        initial_estimates,
        initial_sets: Optional[Sequence[FeasibleSet]] = None,
        weights: Optional[WeightMatrix] = None,
        graph: Optional[Graph] = None,
        batched: bool = False,
    ) -> "EstimatorState":
        """
        Build an estimator; local sets default to the whole space.

        Distributed estimators need `weights`; when `graph` is given the
        weights are checked against it here, once, since the graph is static.

        Raises:
            ModeMismatch: Distributed mode without weights.
            InvalidGraph: The weights violate the consensus assumptions.
            DimensionMismatch: Inconsistent estimate, set or matrix sizes.
        """
        mode = Mode(mode)
        estimates = np.array(initial_estimates, dtype=float)
        if estimates.ndim != 2 or estimates.shape[0] < 1:
            raise DimensionMismatch(
                "initial estimates must be an N x n array", shape=estimates.shape
            )
        N, dim = estimates.shape
        if initial_sets is None:
            initial_sets = [Slab.unbounded(dim) for _ in range(N)]
        if len(initial_sets) != N:
            raise DimensionMismatch(
                "one initial set per node is required", expected=N, got=len(initial_sets)
            )
        for region in initial_sets:
            if region.dim != dim:
                raise DimensionMismatch(
                    "initial set dimension differs from the estimates",
                    expected=dim,
                    got=region.dim,
                )

        if mode is Mode.DISTRIBUTED:
            if weights is None:
                raise ModeMismatch("distributed mode needs a weight matrix")
            if weights.size != N:
                raise DimensionMismatch(
                    "weight matrix does not match the node count",
                    expected=N,
                    got=weights.size,
                )
            if graph is not None:
                report = validate_weights(graph, weights)
                if not report:
                    raise InvalidGraph(
                        "weights violate the consensus assumptions",
                        violations=report.violations,
                    )

        nodes = [
            NodeState(as_vector(row), region)
            for row, region in zip(estimates, initial_sets)
        ]
        return cls(
            nodes=nodes,
            mode=mode,
            weights=weights if mode is Mode.DISTRIBUTED else None,
            batched=batched and mode is Mode.INCREMENTAL_1STEP,
            carrier=N - 1,
            pending=[Slab.unbounded(dim) for _ in range(N)],
        )

    @property
    def N(self) -> int:
        return len(self.nodes)

    @property
    def dim(self) -> int:
        return self.nodes[0].estimate.shape[0]

    @property
    def at_cycle_boundary(self) -> bool:
        """True when every node has been activated equally often."""
        if self.mode is Mode.INCREMENTAL_1STEP:
            return self.clock % self.N == 0
        return True

    def estimates(self) -> np.ndarray:
        return np.vstack([node.estimate for node in self.nodes])

    def feasible_sets(self) -> List[FeasibleSet]:
        return [node.feasible_set for node in self.nodes]

    def require_mode(self, mode: Mode) -> None:
        if self.mode is not mode:
            raise ModeMismatch(
                f"step rule for {mode.value} applied to a {self.mode.value} estimator"
            )
