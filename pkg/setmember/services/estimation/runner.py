"""
Run loop and trajectory recording.
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Literal, Optional

import numpy as np

from setmember.core.errors import EmptySet
from setmember.services.estimation.state import (
    EstimatorState,
    MeasuredSet,
    MeasurementSource,
    Mode,
)
from setmember.services.estimation.steps import (
    distributed_step,
    incremental_cycle_step,
    incremental_onestep,
    onestep_batched,
)
from setmember.services.estimation.stopping import (
    Reference,
    StoppingRule,
    disagreement,
)
from setmember.utils.logging import RunLogger

TrajectoryStatus = Literal["stopped", "no-stop"]


@dataclass
class StepRecord:
    """
    State after instant `k`. Light trajectories fill `estimates`,
    `distances` and `disagreement` on the final record only.
    """

    k: int
    disagreement: Optional[float]
    estimates: Optional[np.ndarray] = None
    distances: Optional[np.ndarray] = None


@dataclass
class Trajectory:
    mode: Mode
    records: List[StepRecord] = field(default_factory=list)
    status: TrajectoryStatus = "no-stop"
    stopped_at: Optional[int] = None
    final_estimates: Optional[np.ndarray] = None

    @property
    def steps(self) -> int:
        return len(self.records)

    @property
    def final_disagreement(self) -> Optional[float]:
        return self.records[-1].disagreement if self.records else None

    @property
    def final_distances(self) -> Optional[np.ndarray]:
        return self.records[-1].distances if self.records else None

    def header(self) -> List[str]:
        dim = self.final_estimates.shape[1]
        return ["k", "node", *[f"x{c}" for c in range(dim)], "dist_to_reference", "disagreement"]

    def rows(self) -> Iterator[list]:
        """CSV rows (k, node, x0 .. x{n-1}, dist_to_reference, disagreement) of recorded steps."""
        for record in self.records:
            if record.estimates is None:
                continue
            for node, estimate in enumerate(record.estimates):
                distance = (
                    float(record.distances[node]) if record.distances is not None else ""
                )
                yield [
                    record.k,
                    node,
                    *(float(value) for value in estimate),
                    distance,
                    record.disagreement,
                ]


def _advance(state: EstimatorState, source: MeasurementSource) -> List[MeasuredSet]:
    """Take one instant in the state's mode; returns the measurement sets consumed."""
    if state.mode is Mode.INCREMENTAL_1STEP and not state.batched:
        # node i's c-th activation consumes its c-th sample
        instant = state.clock // state.N + 1
        consumed = source.measured_sets(instant, nodes=[state.active_index])
        incremental_onestep(state, consumed[0])
        return consumed

    consumed = source.measured_sets(state.clock + 1)
    if state.mode is Mode.INCREMENTAL_NSTEP:
        incremental_cycle_step(state, consumed)
    elif state.mode is Mode.INCREMENTAL_1STEP:
        onestep_batched(state, consumed)
    else:
        distributed_step(state, consumed)
    return consumed


def run_until(
    state: EstimatorState,
    source: MeasurementSource,
    stop: StoppingRule,
    max_steps: int,
    reference: Optional[Reference] = None,
    record_estimates: bool = True,
    logger: Optional[RunLogger] = None,
) -> Trajectory:
    """
    Step `state` until `stop` fires or `max_steps` instants have been taken.

    Args:
        state: Estimator to advance; it is modified in place.
        source: Supplies the measurement sets of every instant.
        stop: Stopping rule, checked after every instant it applies to.
        max_steps: Instant cap. Reaching it yields status "no-stop".
        reference: Current global feasible set. It absorbs every consumed
            measurement set and is what the distance rule measures against.
        record_estimates: Keep estimates and reference distances per record.
        logger: Context logger; a default one is created when omitted.

    Returns:
        The trajectory, one record per instant taken.

    Raises:
        EmptySet: A local feasible set became empty. The exception carries
            the offending node and instant.
    """
    log = logger or RunLogger(mode=state.mode.value, N=state.N)
    trajectory = Trajectory(mode=state.mode)

    try:
        for _ in range(max_steps):
            consumed = _advance(state, source)
            if reference is not None:
                reference.update(consumed)

            record = StepRecord(k=state.clock, disagreement=None)
            if record_estimates:
                estimates = state.estimates()
                record.estimates = estimates
                record.disagreement = disagreement(estimates)
                if reference is not None:
                    record.distances = reference.distances(estimates)
            trajectory.records.append(record)

            if stop.check(state, reference):
                trajectory.status = "stopped"
                trajectory.stopped_at = state.clock
                break
    except EmptySet as e:
        log.warning("Feasible set became empty", node=e.node, instant=e.instant)
        raise

    final = state.estimates()
    trajectory.final_estimates = final
    last = trajectory.records[-1] if trajectory.records else None
    if last is not None and last.estimates is None:
        last.estimates = final
        last.disagreement = disagreement(final)
        if reference is not None:
            last.distances = reference.distances(final)

    if trajectory.status == "stopped":
        log.debug("Stopping rule fired", rule=stop.name, k=trajectory.stopped_at)
    else:
        log.info("Instant cap reached without stopping", rule=stop.name, max_steps=max_steps)
    return trajectory
