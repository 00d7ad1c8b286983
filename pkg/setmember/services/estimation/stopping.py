"""
Stopping rules for estimator runs.

Rules with `every_step = False` are evaluated only when the estimator sits
at an activation-cycle boundary; for 1-step runs that is every N instants,
for the other modes every instant.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

import numpy as np

from setmember.core.errors import InvalidConfig
from setmember.services.estimation.state import EstimatorState, MeasuredSet


class Reference(Protocol):
    """Current global feasible set the distance rule measures against."""

    def update(self, consumed: Sequence[MeasuredSet]) -> None: ...

    def within(self, points: np.ndarray, delta: float) -> bool: ...

    def distances(self, points: np.ndarray) -> np.ndarray: ...


def disagreement(estimates: np.ndarray) -> float:
    """max_{i,j} ||x_i - x_j||."""
    X = np.asarray(estimates, dtype=float)
    if X.shape[0] < 2:
        return 0.0
    gaps = X[:, None, :] - X[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", gaps, gaps))))


class StoppingRule(ABC):
    every_step: bool = False

    @property
    @abstractmethod
    def name(self) -> str: ...

    @abstractmethod
    def should_stop(
        self, state: EstimatorState, reference: Optional[Reference] = None
    ) -> bool: ...

    def check(self, state: EstimatorState, reference: Optional[Reference] = None) -> bool:
        if not self.every_step and not state.at_cycle_boundary:
            return False
        return self.should_stop(state, reference)


@dataclass(frozen=True)
class MaxSteps(StoppingRule):
    """Stop after a fixed number of instants."""

    steps: int
    every_step = True

    @property
    def name(self) -> str:
        return "max-steps"

    def should_stop(self, state, reference=None) -> bool:
        return state.clock >= self.steps


@dataclass(frozen=True)
class Disagreement(StoppingRule):
    """Stop once every pair of node estimates is within `eta`."""

    eta: float

    @property
    def name(self) -> str:
        return "disagreement"

    def should_stop(self, state, reference=None) -> bool:
        return disagreement(state.estimates()) <= self.eta


@dataclass(frozen=True)
class DistanceToReferenceSet(StoppingRule):
    """Stop once every node estimate is within `delta` of the current feasible set."""

    delta: float

    @property
    def name(self) -> str:
        return "distance"

    def should_stop(self, state, reference=None) -> bool:
        if reference is None:
            raise InvalidConfig("the distance stopping rule needs a reference set")
        return reference.within(state.estimates(), self.delta)


def stopping_rule(kind: str, delta: float, max_steps: int) -> StoppingRule:
    """Rule named in an estimator config section."""
    if kind == "distance":
        return DistanceToReferenceSet(delta)
    if kind == "disagreement":
        return Disagreement(delta)
    if kind == "max-steps":
        return MaxSteps(max_steps)
    raise InvalidConfig(f"unknown stopping rule {kind!r}")
