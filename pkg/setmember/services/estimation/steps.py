"""
Step rules of the three estimators.

Every rule first intersects the node's local feasible set with its new
measurement set and then projects an estimate onto the result. The rules
differ only in which estimate is projected and when.
"""

from typing import Sequence

import numpy as np

from setmember.core.errors import BatchSizeMismatch, EmptySet, WrongNode
from setmember.services.estimation.state import (
    EstimatorState,
    MeasuredSet,
    Mode,
)
from setmember.services.geometry import FeasibleSet, Slab


def _frozen(x: np.ndarray) -> np.ndarray:
    x = np.array(x, dtype=float)
    x.flags.writeable = False
    return x


def _ordered(state: EstimatorState, batch: Sequence[MeasuredSet]) -> list:
    """Batch sorted by node; exactly one set for each node 0 .. N-1."""
    ordered = sorted(batch, key=lambda m: m.node)
    if [m.node for m in ordered] != list(range(state.N)):
        raise BatchSizeMismatch(
            "a batch needs exactly one measurement set per node",
            expected=state.N,
            nodes=[m.node for m in ordered],
        )
    return ordered


def _absorb(state: EstimatorState, node: int, region: FeasibleSet) -> FeasibleSet:
    """X_i <- X_i ∩ region, raising EmptySet tagged with the instant being computed."""
    current = state.nodes[node].feasible_set
    updated = current.intersect(region)
    if updated.is_empty:
        raise EmptySet(
            "local feasible set became empty; the noise bound was violated",
            node=node,
            instant=state.clock + 1,
        )
    state.nodes[node].feasible_set = updated
    return updated


def _project_into(state: EstimatorState, node: int, point: np.ndarray) -> None:
    try:
        projected = state.nodes[node].feasible_set.project(point)
    except EmptySet as e:
        raise EmptySet(e.message, node=node, instant=state.clock + 1) from e
    state.nodes[node].estimate = _frozen(projected)


def incremental_cycle_step(
    state: EstimatorState, batch: Sequence[MeasuredSet]
) -> EstimatorState:
    """
    One measurement instant of the N-step incremental estimator.

    Node 0 projects the estimate of node N-1 from the previous instant, then
    each node i projects the estimate node i-1 has just produced. All N
    projections happen within this call and the clock advances by one.
    """
    state.require_mode(Mode.INCREMENTAL_NSTEP)
    for measured in _ordered(state, batch):
        i = measured.node
        _absorb(state, i, measured.region)
        _project_into(state, i, state.nodes[state.carrier].estimate)
        state.carrier = i
    state.clock += 1
    return state


def _activate(state: EstimatorState, node: int) -> None:
    _project_into(state, node, state.nodes[state.carrier].estimate)
    state.carrier = node
    state.active_index = (node + 1) % state.N
    state.clock += 1


def incremental_onestep(state: EstimatorState, measured: MeasuredSet) -> EstimatorState:
    """
    One instant of the 1-step incremental estimator: only the active node
    measures, intersects and projects the estimate of the previously active
    node. Activation is cyclic over 0 .. N-1.

    Raises:
        WrongNode: If the measurement is not the active node's.
    """
    state.require_mode(Mode.INCREMENTAL_1STEP)
    if measured.node != state.active_index:
        raise WrongNode(
            "measurement does not belong to the active node",
            expected=state.active_index,
            got=measured.node,
        )
    _absorb(state, measured.node, measured.region)
    _activate(state, measured.node)
    return state


def onestep_batched(state: EstimatorState, batch: Sequence[MeasuredSet]) -> EstimatorState:
    """
    1-step variant where every node measures at every instant. Idle nodes
    buffer their measurement sets; the active node intersects everything it
    buffered since its previous activation, then projects.
    """
    state.require_mode(Mode.INCREMENTAL_1STEP)
    active = state.active_index
    for measured in _ordered(state, batch):
        state.pending[measured.node] = state.pending[measured.node].intersect(
            measured.region
        )
    _absorb(state, active, state.pending[active])
    state.pending[active] = Slab.unbounded(state.dim)
    _activate(state, active)
    return state


def distributed_step(state: EstimatorState, batch: Sequence[MeasuredSet]) -> EstimatorState:
    """
    One synchronous instant of the distributed estimator.

    All nodes update their local sets, then every z_i = Σ_j a_ij x_j(k) is
    computed from the previous instant's estimates before any estimate is
    replaced by its projection P_{X_i}[z_i].
    """
    state.require_mode(Mode.DISTRIBUTED)
    ordered = _ordered(state, batch)
    for measured in ordered:
        _absorb(state, measured.node, measured.region)

    consensus = state.weights.entries @ state.estimates()
    projected = []
    for i, node in enumerate(state.nodes):
        try:
            projected.append(_frozen(node.feasible_set.project(consensus[i])))
        except EmptySet as e:
            raise EmptySet(e.message, node=i, instant=state.clock + 1) from e
    for node, estimate in zip(state.nodes, projected):
        node.estimate = estimate
    state.clock += 1
    return state
