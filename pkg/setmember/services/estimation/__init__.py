from setmember.services.estimation.runner import StepRecord, Trajectory, run_until
from setmember.services.estimation.state import (
    EstimatorState,
    MeasuredSet,
    MeasurementSource,
    Mode,
    NodeState,
)
from setmember.services.estimation.steps import (
    distributed_step,
    incremental_cycle_step,
    incremental_onestep,
    onestep_batched,
)
from setmember.services.estimation.stopping import (
    Disagreement,
    DistanceToReferenceSet,
    MaxSteps,
    StoppingRule,
    disagreement,
    stopping_rule,
)

__all__ = [
    "Disagreement",
    "DistanceToReferenceSet",
    "EstimatorState",
    "MaxSteps",
    "MeasuredSet",
    "MeasurementSource",
    "Mode",
    "NodeState",
    "StepRecord",
    "StoppingRule",
    "Trajectory",
    "disagreement",
    "distributed_step",
    "incremental_cycle_step",
    "incremental_onestep",
    "onestep_batched",
    "run_until",
    "stopping_rule",
]
