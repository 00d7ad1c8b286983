import json
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from setmember.core.config import (
    DEFAULT_CAMPAIGN_NODES,
    DEFAULT_DELTA,
    DEFAULT_DIM,
    DEFAULT_INIT_RANGE,
    DEFAULT_MAX_STEPS,
    DEFAULT_NODES,
    DEFAULT_NOISE_BOUND_RANGE,
    DEFAULT_REGRESSOR_RANGE,
    DEFAULT_RUNS_PER_N,
    DEFAULT_THETA_RANGE,
    DYKSTRA_TOL,
)
from setmember.core.errors import InvalidConfig

Mode = Literal["incremental-nstep", "incremental-1step", "distributed"]
StopRule = Literal["distance", "disagreement", "max-steps"]
Topology = Literal["ring", "complete", "path", "star", "edges"]
WeightRule = Literal["neighbor-average", "metropolis", "max-degree", "explicit"]
ReferenceKind = Literal["current", "asymptotic"]

Range = Tuple[float, float]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_range(name: str, bounds: Range) -> None:
    if bounds[0] > bounds[1]:
        raise ValueError(f"{name} must be ordered as [low, high], got {list(bounds)}")


class ScenarioConfig(_Section):
    """
    Linear regression scenario: y_i(k) = φ_iᵀθ* + w_i(k), |w_i(k)| <= ε_i.

    Attributes:
        dim (int): Parameter dimension n.
        nodes (int): Number of sensor nodes N.
        seed (int): Seed for the scenario draws and the measurement noise.
        noise_bound_range ([float, float]): Range ε_i is drawn from.
        theta_range ([float, float]): Per-coordinate range θ* is drawn from.
        init_range ([float, float]): Per-coordinate range of the initial estimates.
        regressor_range ([float, float]): Per-coordinate range of the raw regressors,
            normalized after drawing.
        assumed_noise_scale (float): Slab half-width is assumed_noise_scale * ε_i;
            values below 1 underestimate the noise bound.
        theta_star, regressors, noise_bounds, initial_estimates: Explicit values
            that replace the corresponding random draws.
    """

    dim: int = Field(DEFAULT_DIM, ge=1)
    nodes: int = Field(DEFAULT_NODES, ge=1)
    seed: int = Field(0, ge=0)
    noise_bound_range: Range = DEFAULT_NOISE_BOUND_RANGE
    theta_range: Range = DEFAULT_THETA_RANGE
    init_range: Range = DEFAULT_INIT_RANGE
    regressor_range: Range = DEFAULT_REGRESSOR_RANGE
    assumed_noise_scale: float = Field(1.0, ge=0.0)
    theta_star: Optional[List[float]] = None
    regressors: Optional[List[List[float]]] = None
    noise_bounds: Optional[List[float]] = None
    initial_estimates: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _consistent(self) -> "ScenarioConfig":
        for name in ("noise_bound_range", "theta_range", "init_range", "regressor_range"):
            _check_range(name, getattr(self, name))
        if self.noise_bound_range[0] < 0:
            raise ValueError("noise_bound_range must be nonnegative")
        if self.theta_star is not None and len(self.theta_star) != self.dim:
            raise ValueError("theta_star must have `dim` entries")
        for name in ("regressors", "initial_estimates"):
            rows = getattr(self, name)
            if rows is None:
                continue
            if len(rows) != self.nodes or any(len(row) != self.dim for row in rows):
                raise ValueError(f"{name} must be a `nodes` x `dim` array")
        if self.noise_bounds is not None:
            if len(self.noise_bounds) != self.nodes:
                raise ValueError("noise_bounds must have `nodes` entries")
            if any(bound < 0 for bound in self.noise_bounds):
                raise ValueError("noise_bounds must be nonnegative")
        return self


class EstimatorConfig(_Section):
    """
    Estimator mode and stopping rule for a single run.

    Attributes:
        mode: incremental-nstep (full cycle per instant), incremental-1step
            (one active node per instant) or distributed.
        onestep_batched (bool): 1-step variant where every node measures at every
            instant and the active node intersects all pending measurements.
        stop: distance (to the reference set), disagreement or max-steps.
        delta (float): Threshold of the distance or disagreement rule.
        reference: Set the distance rule measures against: "current" is the
            feasible set X(k) of the measurements so far, "asymptotic" its limit
            as k grows.
        max_steps (int): Instant cap.
        dykstra_tol (float): Accuracy of the distance evaluations.
        record_estimates (bool): Keep per-step estimates and distances.
    """

    mode: Mode = "distributed"
    onestep_batched: bool = False
    stop: StopRule = "distance"
    delta: float = Field(DEFAULT_DELTA, gt=0.0)
    reference: ReferenceKind = "current"
    max_steps: int = Field(DEFAULT_MAX_STEPS, ge=1)
    dykstra_tol: float = Field(DYKSTRA_TOL, gt=0.0)
    record_estimates: bool = True


class NetworkConfig(_Section):
    """
    Communication graph and consensus weights.

    Edges are 0-based pairs [j, i] meaning "j sends its estimate to i".
    """

    topology: Topology = "ring"
    bidirectional: bool = True
    edges: Optional[List[Tuple[int, int]]] = None
    weights: WeightRule = "neighbor-average"
    matrix: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _consistent(self) -> "NetworkConfig":
        if self.topology == "edges" and self.edges is None:
            raise ValueError("topology 'edges' needs an explicit edge list")
        if self.weights == "explicit" and self.matrix is None:
            raise ValueError("weights 'explicit' needs a matrix")
        return self


class CampaignArm(_Section):
    """One curve of the comparison: an estimator mode plus, for distributed runs, a topology."""

    label: str
    mode: Mode
    topology: Optional[Topology] = None
    weights: WeightRule = "neighbor-average"
    onestep_batched: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "CampaignArm":
        if self.mode == "distributed" and self.topology is None:
            raise ValueError(f"arm {self.label!r}: distributed arms need a topology")
        if self.topology in ("edges",) or self.weights == "explicit":
            raise ValueError(f"arm {self.label!r}: campaigns need generated topologies")
        return self


def default_arms() -> List[CampaignArm]:
    return [
        CampaignArm(label="incremental-nstep", mode="incremental-nstep"),
        CampaignArm(label="complete", mode="distributed", topology="complete"),
        CampaignArm(label="ring", mode="distributed", topology="ring"),
        CampaignArm(label="incremental-1step", mode="incremental-1step"),
    ]


class CampaignSection(_Section):
    nodes: List[int] = Field(default_factory=lambda: list(DEFAULT_CAMPAIGN_NODES))
    runs_per_n: int = Field(DEFAULT_RUNS_PER_N, ge=1)
    seed: int = Field(0, ge=0)
    delta: float = Field(DEFAULT_DELTA, gt=0.0)
    max_steps: int = Field(DEFAULT_MAX_STEPS, ge=1)
    arms: List[CampaignArm] = Field(default_factory=default_arms)
    reference: ReferenceKind = "asymptotic"

    @model_validator(mode="after")
    def _consistent(self) -> "CampaignSection":
        if not self.nodes or any(count < 1 for count in self.nodes):
            raise ValueError("campaign nodes must be a nonempty list of positive counts")
        if not self.arms:
            raise ValueError("campaign needs at least one arm")
        labels = [arm.label for arm in self.arms]
        if len(set(labels)) != len(labels):
            raise ValueError("campaign arm labels must be unique")
        return self


class CampaignConfig(_Section):
    """
    Fully resolved Monte Carlo campaign.

    Attributes:
        dim (int): Parameter dimension n.
        nodes (List[int]): Node counts N to sweep.
        runs_per_n (int): Runs per (arm, N) cell.
        arms (List[CampaignArm]): Mode/topology combinations compared.
        delta (float): Stopping distance to the reference set.
        reference: "asymptotic" (limit of X(k), the default) or "current" (X(k)).
        max_steps (int): Instant cap per run.
        seed (int): Campaign seed; run seeds derive from (seed, N, run).
        scenario (ScenarioConfig): Draw ranges shared by every generated scenario.
        dykstra_tol (float): Accuracy of the distance evaluations.
    """

    dim: int = Field(DEFAULT_DIM, ge=1)
    nodes: List[int] = Field(default_factory=lambda: list(DEFAULT_CAMPAIGN_NODES))
    runs_per_n: int = Field(DEFAULT_RUNS_PER_N, ge=1)
    arms: List[CampaignArm] = Field(default_factory=default_arms)
    delta: float = Field(DEFAULT_DELTA, gt=0.0)
    reference: ReferenceKind = "asymptotic"
    max_steps: int = Field(DEFAULT_MAX_STEPS, ge=1)
    seed: int = Field(0, ge=0)
    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    dykstra_tol: float = Field(DYKSTRA_TOL, gt=0.0)


class ExperimentConfig(_Section):
    """Top-level config document with the scenario, estimator, network and campaign sections."""

    scenario: ScenarioConfig = Field(default_factory=ScenarioConfig)
    estimator: EstimatorConfig = Field(default_factory=EstimatorConfig)
    network: NetworkConfig = Field(default_factory=NetworkConfig)
    campaign: CampaignSection = Field(default_factory=CampaignSection)

    @classmethod
    def load(cls, path: Path) -> "ExperimentConfig":
        """
        Read and validate a JSON config file.

        Raises:
            OSError: If the file cannot be read.
            InvalidConfig: If the document is not valid JSON or fails validation.
        """
        text = Path(path).read_text(encoding="utf-8")
        return cls.parse_document(text)

    @classmethod
    def parse_document(cls, text: str) -> "ExperimentConfig":
        try:
            return cls.model_validate(json.loads(text))
        except json.JSONDecodeError as e:
            raise InvalidConfig(f"config is not valid JSON: {e}") from e
        except ValidationError as e:
            raise InvalidConfig(
                "config failed validation",
                errors=[
                    {"loc": list(err["loc"]), "msg": err["msg"]} for err in e.errors()
                ],
            ) from e

    def with_seed(self, seed: Optional[int]) -> "ExperimentConfig":
        """Copy with the scenario and campaign seeds replaced, if `seed` is given."""
        if seed is None:
            return self
        return self.model_copy(
            update={
                "scenario": self.scenario.model_copy(update={"seed": seed}),
                "campaign": self.campaign.model_copy(update={"seed": seed}),
            }
        )

    def campaign_config(self) -> CampaignConfig:
        return CampaignConfig(
            dim=self.scenario.dim,
            nodes=self.campaign.nodes,
            runs_per_n=self.campaign.runs_per_n,
            arms=self.campaign.arms,
            delta=self.campaign.delta,
            reference=self.campaign.reference,
            max_steps=self.campaign.max_steps,
            seed=self.campaign.seed,
            scenario=self.scenario,
            dykstra_tol=self.estimator.dykstra_tol,
        )
