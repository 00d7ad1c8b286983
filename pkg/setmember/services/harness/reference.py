"""
Reference feasible sets a run's stopping distance is measured against.

Each node's sets are strips along its own regressor, so a reference set is
held as one (lower, upper) pair per node over a fixed direction matrix. The
largest single-strip distance is a cheap vectorized lower bound on the
exact distance; the exact strip-polytope projection runs only where the
bound cannot decide a query.

Two kinds exist. "current" is X(k) = ∩_i X_i(k), updated with every
consumed measurement. "asymptotic" is the limit of X(k) as k grows, which a
scenario determines up front (see ReferenceSet.asymptotic).
"""

from typing import List, Literal, Optional, Sequence

import numpy as np

from setmember.core.config import DYKSTRA_TOL
from setmember.core.errors import (
    DimensionMismatch,
    EmptySet,
    InvalidConfig,
    InvalidGeometry,
)
from setmember.schemas.config import ReferenceKind
from setmember.services.estimation.state import MeasuredSet
from setmember.services.geometry import Slab, distance_to_strips, dykstra_project
from setmember.services.regression.model import Scenario, SensorModel

Solver = Literal["active-set", "dykstra"]


class ReferenceSet:
    """
    Strip polytope over the nodes' regressors.

    Attributes:
        kind: "current" tracks measurements; "asymptotic" is fixed.
        tol: Accuracy of Dykstra distances. The active-set solver is exact.
        solver: "active-set" (default) or "dykstra".
        directions: N x n regressor matrix.
        lower, upper: Per-node strip bounds.
    """

    def __init__(
        self,
        sensors: Sequence[SensorModel],
        tol: float = DYKSTRA_TOL,
        solver: Solver = "active-set",
        kind: ReferenceKind = "current",
    ):
        if not sensors:
            raise InvalidGeometry("a reference set needs at least one sensor")
        self.kind = kind
        self.tol = tol
        self.solver = solver
        self._templates: List[Slab] = [sensor._strip for sensor in sensors]
        self.directions = np.vstack([sensor.regressor for sensor in sensors])
        self.lower = np.full(len(sensors), -np.inf)
        self.upper = np.full(len(sensors), np.inf)

    @classmethod
    def for_scenario(
        cls, scenario: Scenario, tol: float = DYKSTRA_TOL, solver: Solver = "active-set"
    ) -> "ReferenceSet":
        """Empty-history X(0) = R^n over the scenario's assumed sensors."""
        return cls(scenario.assumed_sensors, tol=tol, solver=solver)

    @classmethod
    def asymptotic(
        cls, scenario: Scenario, tol: float = DYKSTRA_TOL, solver: Solver = "active-set"
    ) -> "ReferenceSet":
        """
        Limit of X(k) for the scenario's uniform noise.

        The running max and min of node i's measurements tend to
        φ_iᵀθ* + ε_i and φ_iᵀθ* - ε_i, so with strips of half-width s·ε_i the
        node strip tends to |φ_iᵀθ - φ_iᵀθ*| <= (s - 1)ε_i. For s = 1 that is
        the hyperplane through θ*, and X = {θ*} once the regressors span R^n.

        Raises:
            InvalidConfig: If s < 1, where the limit set is empty.
        """
        if scenario.assumed_noise_scale < 1.0:
            raise InvalidConfig(
                "the asymptotic reference needs assumed_noise_scale >= 1",
                assumed_noise_scale=scenario.assumed_noise_scale,
            )
        ref = cls(scenario.assumed_sensors, tol=tol, solver=solver, kind="asymptotic")
        clean = ref.directions @ scenario.theta_star
        slack = np.array(
            [
                assumed.noise_bound - true.noise_bound
                for assumed, true in zip(scenario.assumed_sensors, scenario.sensors)
            ]
        )
        ref.lower = clean - slack
        ref.upper = clean + slack
        return ref

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @property
    def is_empty(self) -> bool:
        return bool(np.any(self.lower > self.upper))

    def update(self, consumed: Sequence[MeasuredSet]) -> None:
        """Intersect the node strips with newly consumed measurement strips."""
        if self.kind == "asymptotic":
            return
        for measured in consumed:
            region = measured.region
            if not isinstance(region, Slab):
                raise InvalidGeometry(
                    "reference sets only track strip measurements", node=measured.node
                )
            bounds = self._templates[measured.node].parallel_bounds(region)
            if bounds is None:
                raise InvalidGeometry(
                    "measurement strip is not aligned with the node's regressor",
                    node=measured.node,
                )
            self.lower[measured.node] = max(self.lower[measured.node], bounds[0])
            self.upper[measured.node] = min(self.upper[measured.node], bounds[1])

    def slabs(self) -> List[Slab]:
        return [
            template.with_bounds(lower, upper)
            for template, lower, upper in zip(self._templates, self.lower, self.upper)
        ]

    def lower_bounds(self, points: np.ndarray) -> np.ndarray:
        """Per point, the largest distance to a single strip."""
        P = np.atleast_2d(np.asarray(points, dtype=float))
        if P.shape[1] != self.dim:
            raise DimensionMismatch(
                "point and reference dimensions differ", expected=self.dim, got=P.shape[1]
            )
        s = P @ self.directions.T
        gaps = np.maximum(s - self.upper, self.lower - s)
        return np.maximum(gaps.max(axis=1), 0.0)

    def _exact(self, point: np.ndarray, tol: float) -> float:
        if self.solver == "active-set":
            return distance_to_strips(self.directions, self.lower, self.upper, point)
        bounded = [slab for slab in self.slabs() if not slab.is_unbounded]
        if len(bounded) == 1:
            return bounded[0].distance(point)
        return float(np.linalg.norm(point - dykstra_project(bounded, point, tol=tol)))

    def _require_nonempty(self) -> None:
        if self.is_empty:
            node = int(np.flatnonzero(self.lower > self.upper)[0])
            raise EmptySet("reference feasible set is empty", node=node)

    def distance(
        self, point, bound: Optional[float] = None, tol: Optional[float] = None
    ) -> float:
        """Distance from `point` to the reference set; 0 inside."""
        self._require_nonempty()
        point = np.asarray(point, dtype=float)
        if bound is None:
            bound = float(self.lower_bounds(point)[0])
        if bound == 0.0:
            return 0.0
        return self._exact(point, self.tol if tol is None else tol)

    def distances(self, points: np.ndarray) -> np.ndarray:
        bounds = self.lower_bounds(points)
        return np.array(
            [self.distance(point, bound) for point, bound in zip(points, bounds)]
        )

    def within(self, points: np.ndarray, delta: float) -> bool:
        """True iff every point is within `delta` of the reference set."""
        self._require_nonempty()
        points = np.atleast_2d(np.asarray(points, dtype=float))
        bounds = self.lower_bounds(points)
        if np.any(bounds > delta):
            return False
        order = np.argsort(-bounds)
        return all(self.distance(points[i], bounds[i]) <= delta for i in order)


def reference_set(
    kind: ReferenceKind, scenario: Scenario, tol: float = DYKSTRA_TOL
) -> ReferenceSet:
    """Reference set of the given kind for a scenario."""
    if kind == "asymptotic":
        return ReferenceSet.asymptotic(scenario, tol=tol)
    return ReferenceSet.for_scenario(scenario, tol=tol)


def distance_to_reference(x, ref: ReferenceSet, tol: Optional[float] = None) -> float:
    """
    ||x - P_X(x)|| for the reference set X. `tol` overrides the set's Dykstra
    accuracy for this call only.

    Raises:
        EmptySet: If the reference set is empty.
        NoConvergence: From the projection solver.
    """
    return ref.distance(x, tol=tol)
