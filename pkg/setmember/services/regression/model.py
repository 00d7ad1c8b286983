"""
Linear regression sensor network with unknown-but-bounded noise.

Node i measures y_i(k) = φ_iᵀθ* + w_i(k) with |w_i(k)| <= ε_i, so every
measurement confines θ* to the strip |φ_iᵀθ - y_i(k)| <= ε_i, and the
intersection of a node's strips is again a strip bounded by the running
maximum and minimum of its measurements.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from setmember.core.config import UNIT_NORM_TOL
from setmember.core.errors import InvalidConfig, InvalidGeometry, WrongNode
from setmember.schemas.config import ScenarioConfig
from setmember.services.estimation.state import MeasuredSet
from setmember.services.geometry import Box, Slab, as_vector
from setmember.services.regression.noise import SCENARIO_STREAM, symmetric_noise

NOISE_LAW = "uniform-symmetric"


def _normalized(row) -> np.ndarray:
    vector = np.array(row, dtype=float)
    norm = float(np.linalg.norm(vector))
    if norm == 0.0 or not np.isfinite(norm):
        raise InvalidGeometry("regressors must be finite nonzero vectors")
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        vector = vector / norm
    return vector


@dataclass(frozen=True, eq=False)
class SensorModel:
    """Unit regressor φ_i and noise bound ε_i of one node."""

    regressor: np.ndarray
    noise_bound: float
    _strip: Slab = field(init=False, repr=False)

    def __post_init__(self):
        regressor = as_vector(_normalized(self.regressor))
        noise_bound = float(self.noise_bound)
        if not noise_bound >= 0.0:
            raise InvalidGeometry("noise bound must be nonnegative", bound=noise_bound)
        object.__setattr__(self, "regressor", regressor)
        object.__setattr__(self, "noise_bound", noise_bound)
        object.__setattr__(self, "_strip", Slab(regressor, -np.inf, np.inf))

    def strip(self, value: float) -> Slab:
        """Measurement strip |φᵀθ - value| <= ε, sharing this sensor's direction."""
        return self._strip.with_bounds(value - self.noise_bound, value + self.noise_bound)


@dataclass(frozen=True)
class Measurement:
    node: int
    instant: int
    value: float

    def __post_init__(self):
        if self.instant < 1:
            raise InvalidConfig("measurement instants start at 1", instant=self.instant)


def measurement_set(m: Measurement, model: SensorModel) -> Slab:
    """Slab(φ_i, y - ε_i, y + ε_i)."""
    return model.strip(m.value)


@dataclass
class RunningSlab:
    """
    Local feasible set of a regression node kept as the running max/min of
    its measurements. Crossed bounds flag the empty state; consumers see it
    as EmptySet when they project or measure distances.
    """

    node: int
    model: SensorModel
    max_y: float = -np.inf
    min_y: float = np.inf
    count: int = 0

    @property
    def lower(self) -> float:
        return self.max_y - self.model.noise_bound

    @property
    def upper(self) -> float:
        return self.min_y + self.model.noise_bound

    @property
    def is_empty(self) -> bool:
        return self.count > 0 and self.max_y - self.min_y > 2.0 * self.model.noise_bound

    def slab(self) -> Slab:
        """Current strip; the whole space before the first measurement."""
        if self.count == 0:
            return self.model._strip
        return self.model._strip.with_bounds(self.lower, self.upper)

    def update(self, m: Measurement) -> "RunningSlab":
        if m.node != self.node:
            raise WrongNode(
                "measurement belongs to another node", expected=self.node, got=m.node
            )
        self.max_y = max(self.max_y, m.value)
        self.min_y = min(self.min_y, m.value)
        self.count += 1
        return self


def update_running_slab(rs: RunningSlab, m: Measurement) -> RunningSlab:
    return rs.update(m)


@dataclass(frozen=True, eq=False)
class Scenario:
    """
    One Monte Carlo instance: θ*, the sensors, the initial estimates and the
    noise seed. `assumed_noise_scale` scales the bound used to build strips
    (1.0 means the true bound).
    """

    theta_star: np.ndarray
    sensors: Tuple[SensorModel, ...]
    noise_seed: int
    initial_estimates: np.ndarray
    assumed_noise_scale: float = 1.0
    noise_law: str = NOISE_LAW
    _clean: np.ndarray = field(init=False, repr=False)
    _bounds: np.ndarray = field(init=False, repr=False)
    _assumed: Tuple[SensorModel, ...] = field(init=False, repr=False)

    def __post_init__(self):
        theta = as_vector(self.theta_star)
        sensors = tuple(self.sensors)
        if not sensors:
            raise InvalidConfig("a scenario needs at least one sensor")
        if any(sensor.regressor.shape[0] != theta.shape[0] for sensor in sensors):
            raise InvalidConfig("regressor and parameter dimensions differ")
        inits = np.array(self.initial_estimates, dtype=float)
        if inits.shape != (len(sensors), theta.shape[0]):
            raise InvalidConfig(
                "initial estimates must be an N x n array", shape=list(inits.shape)
            )
        inits.flags.writeable = False
        regressors = np.vstack([sensor.regressor for sensor in sensors])
        clean = regressors @ theta
        clean.flags.writeable = False
        bounds = np.array([sensor.noise_bound for sensor in sensors])
        bounds.flags.writeable = False
        scale = float(self.assumed_noise_scale)
        assumed = (
            sensors
            if scale == 1.0
            else tuple(SensorModel(s.regressor, scale * s.noise_bound) for s in sensors)
        )
        object.__setattr__(self, "theta_star", theta)
        object.__setattr__(self, "sensors", sensors)
        object.__setattr__(self, "initial_estimates", inits)
        object.__setattr__(self, "assumed_noise_scale", scale)
        object.__setattr__(self, "_clean", clean)
        object.__setattr__(self, "_bounds", bounds)
        object.__setattr__(self, "_assumed", assumed)

    @property
    def dim(self) -> int:
        return self.theta_star.shape[0]

    @property
    def nodes(self) -> int:
        return len(self.sensors)

    @property
    def assumed_sensors(self) -> Tuple[SensorModel, ...]:
        """Sensor models carrying the bound used to build measurement strips."""
        return self._assumed

    def measurements(self, instant: int) -> List[Measurement]:
        """Measurements of every node at `instant`."""
        values = self._clean + symmetric_noise(self.noise_seed, instant, self._bounds)
        return [
            Measurement(node, instant, float(value)) for node, value in enumerate(values)
        ]

    def measured_sets(
        self, instant: int, nodes: Optional[Sequence[int]] = None
    ) -> List[MeasuredSet]:
        values = self._clean + symmetric_noise(self.noise_seed, instant, self._bounds)
        selected = range(self.nodes) if nodes is None else nodes
        return [
            MeasuredSet(
                node=node,
                instant=instant,
                region=self._assumed[node].strip(float(values[node])),
                value=float(values[node]),
            )
            for node in selected
        ]

    def to_config(self, seed: Optional[int] = None) -> ScenarioConfig:
        """Explicit config that regenerates this scenario exactly."""
        return ScenarioConfig(
            dim=self.dim,
            nodes=self.nodes,
            seed=self.noise_seed if seed is None else seed,
            assumed_noise_scale=self.assumed_noise_scale,
            theta_star=self.theta_star.tolist(),
            regressors=[sensor.regressor.tolist() for sensor in self.sensors],
            noise_bounds=[sensor.noise_bound for sensor in self.sensors],
            initial_estimates=self.initial_estimates.tolist(),
        )


def measure(scenario: Scenario, node: int, instant: int) -> Measurement:
    """
    y = φ_iᵀθ* + w with w uniform on [-ε_i, ε_i], drawn from (noise seed,
    node, instant) alone, so the same arguments always give the same value.
    """
    if not 0 <= node < scenario.nodes:
        raise WrongNode("node index out of range", node=node, N=scenario.nodes)
    return scenario.measurements(instant)[node]


def generate_scenario(
    n: int, N: int, seed: int, cfg: Optional[ScenarioConfig] = None
) -> Scenario:
    """
    Draw θ*, regressors, noise bounds and initial estimates from `seed`.

    Raw regressors are uniform in the regressor box and then normalized; θ*
    and the initial estimates are uniform in their boxes; ε_i is uniform in
    the noise-bound range. Explicit values in `cfg` replace the draws, and
    every draw is made regardless, so overriding one value never changes the
    others.

    Raises:
        InvalidConfig: On nonpositive sizes or values inconsistent with (n, N).
    """
    if n < 1 or N < 1:
        raise InvalidConfig("scenario needs n >= 1 and N >= 1", n=n, N=N)
    cfg = cfg or ScenarioConfig(dim=n, nodes=N, seed=seed)
    if cfg.noise_bound_range[0] < 0:
        raise InvalidConfig("noise bound range must be nonnegative")

    rng = np.random.default_rng(np.random.SeedSequence([seed, SCENARIO_STREAM]))
    theta = Box.cube(n, *cfg.theta_range).sample(rng)
    raw_regressors = Box.cube(n, *cfg.regressor_range).sample(rng, N)
    bounds = rng.uniform(*cfg.noise_bound_range, size=N)
    inits = Box.cube(n, *cfg.init_range).sample(rng, N)

    try:
        if cfg.theta_star is not None:
            theta = np.array(cfg.theta_star, dtype=float)
        if cfg.regressors is not None:
            raw_regressors = np.array(cfg.regressors, dtype=float)
        if cfg.noise_bounds is not None:
            bounds = np.array(cfg.noise_bounds, dtype=float)
        if cfg.initial_estimates is not None:
            inits = np.array(cfg.initial_estimates, dtype=float)
        if theta.shape != (n,) or raw_regressors.shape != (N, n):
            raise InvalidConfig("explicit scenario values do not match (n, N)", n=n, N=N)
        sensors = tuple(
            SensorModel(row, bound) for row, bound in zip(raw_regressors, bounds)
        )
    except InvalidGeometry as e:
        raise InvalidConfig(e.message, **e.detail) from e

    return Scenario(
        theta_star=theta,
        sensors=sensors,
        noise_seed=seed,
        initial_estimates=inits,
        assumed_noise_scale=cfg.assumed_noise_scale,
    )


def scenario_from_config(cfg: ScenarioConfig) -> Scenario:
    return generate_scenario(cfg.dim, cfg.nodes, cfg.seed, cfg)
