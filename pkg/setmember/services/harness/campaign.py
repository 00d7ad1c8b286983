"""
Monte Carlo campaigns comparing estimator arms over several network sizes.

Every run is a pure function of its task: the scenario seed derives from
(campaign seed, N, run index) and is shared by all arms, so arms are
compared on identical scenarios and results do not depend on how runs are
spread over worker processes.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from setmember.core.config import SETMEMBER_THREADS
from setmember.core.errors import EmptySet, InvalidConfig, InvalidGraph, NoConvergence
from setmember.schemas.config import (
    CampaignArm,
    CampaignConfig,
    NetworkConfig,
    ReferenceKind,
    ScenarioConfig,
)
from setmember.schemas.results import RunRecord
from setmember.services.estimation import (
    DistanceToReferenceSet,
    EstimatorState,
    Mode,
    run_until,
)
from setmember.services.harness.reference import reference_set
from setmember.services.network import WeightMatrix, build_network, validate_weights
from setmember.services.regression import generate_scenario
from setmember.utils.logging import RunLogger

logger = RunLogger("setmember.campaign")


def run_seed(campaign_seed: int, N: int, run: int) -> int:
    """Scenario seed of run `run` at size N."""
    state = np.random.SeedSequence([campaign_seed, N, run]).generate_state(1, np.uint64)
    return int(state[0])


@dataclass(frozen=True)
class RunTask:
    arm: CampaignArm
    N: int
    run: int
    seed: int
    scenario: ScenarioConfig
    delta: float
    max_steps: int
    dykstra_tol: float
    reference: ReferenceKind = "asymptotic"
    weights: Optional[WeightMatrix] = None


def execute_run(task: RunTask) -> RunRecord:
    """Generate the run's scenario and step the arm's estimator until it stops."""
    scenario_cfg = task.scenario.model_copy(
        update={
            "nodes": task.N,
            "seed": task.seed,
            "theta_star": None,
            "regressors": None,
            "noise_bounds": None,
            "initial_estimates": None,
        }
    )
    scenario = generate_scenario(scenario_cfg.dim, task.N, task.seed, scenario_cfg)
    state = EstimatorState.create(
        Mode(task.arm.mode),
        scenario.initial_estimates,
        weights=task.weights,
        batched=task.arm.onestep_batched,
    )
    reference = reference_set(task.reference, scenario, tol=task.dykstra_tol)
    run_log = logger.bind(arm=task.arm.label, N=task.N, run=task.run)

    fields = dict(
        arm=task.arm.label, mode=task.arm.mode, N=task.N, run=task.run, seed=task.seed
    )
    try:
        trajectory = run_until(
            state,
            scenario,
            DistanceToReferenceSet(task.delta),
            task.max_steps,
            reference=reference,
            record_estimates=False,
            logger=run_log,
        )
    except EmptySet as e:
        return RunRecord(
            **fields,
            iterations=e.instant if e.instant is not None else state.clock,
            status="empty-set",
            error=e.to_dict(),
        )
    except NoConvergence as e:
        run_log.warning("Distance evaluation did not converge", instant=state.clock)
        return RunRecord(
            **fields, iterations=state.clock, status="no-convergence", error=e.to_dict()
        )

    converged = trajectory.status == "stopped"
    return RunRecord(
        **fields,
        iterations=trajectory.stopped_at if converged else trajectory.steps,
        status="converged" if converged else "no-stop",
        final_disagreement=trajectory.final_disagreement,
    )


@dataclass
class CampaignResult:
    """Per-run records in (arm, N, run) order, plus per-cell views."""

    config: CampaignConfig
    records: List[RunRecord] = field(default_factory=list)

    def cell(self, arm: str, N: int) -> List[RunRecord]:
        return [r for r in self.records if r.arm == arm and r.N == N]

    def iterations(self, arm: str, N: int) -> np.ndarray:
        """Iteration counts of the cell's converged runs, in run order."""
        return np.array(
            [r.iterations for r in self.cell(arm, N) if r.status == "converged"],
            dtype=float,
        )


def _arm_weights(cfg: CampaignConfig) -> Dict[Tuple[int, int], WeightMatrix]:
    """Weights per (arm, N), built and validated once before any run starts."""
    weights = {}
    for index, arm in enumerate(cfg.arms):
        if arm.mode != Mode.DISTRIBUTED.value:
            continue
        network = NetworkConfig(topology=arm.topology, weights=arm.weights)
        for N in cfg.nodes:
            graph, matrix = build_network(network, N)
            report = validate_weights(graph, matrix)
            if not report:
                raise InvalidGraph(
                    f"arm {arm.label!r} violates the consensus assumptions",
                    N=N,
                    violations=report.violations,
                )
            weights[(index, N)] = matrix
    return weights


def campaign_tasks(cfg: CampaignConfig) -> List[RunTask]:
    weights = _arm_weights(cfg)
    scenario = cfg.scenario.model_copy(update={"dim": cfg.dim})
    return [
        RunTask(
            arm=arm,
            N=N,
            run=run,
            seed=run_seed(cfg.seed, N, run),
            scenario=scenario,
            delta=cfg.delta,
            max_steps=cfg.max_steps,
            dykstra_tol=cfg.dykstra_tol,
            reference=cfg.reference,
            weights=weights.get((index, N)),
        )
        for index, arm in enumerate(cfg.arms)
        for N in cfg.nodes
        for run in range(cfg.runs_per_n)
    ]


def run_campaign(cfg: CampaignConfig, workers: Optional[int] = None) -> CampaignResult:
    """
    Run every (arm, N, run) of the campaign.

    Failed runs (empty feasible set, instant cap, projection solver cap) are recorded
    with their status and never abort the campaign.

    Args:
        cfg: Resolved campaign configuration.
        workers: Worker processes; defaults to SETMEMBER_THREADS. One worker
            runs everything in this process.

    Raises:
        InvalidGraph: If an arm's network violates the consensus assumptions.
        InvalidSize: If an arm's topology cannot be built for some N.
        InvalidConfig: If the asymptotic reference is requested for a
            scenario whose assumed noise bound is below the true one.
    """
    if cfg.reference == "asymptotic" and cfg.scenario.assumed_noise_scale < 1.0:
        raise InvalidConfig(
            "the asymptotic reference needs assumed_noise_scale >= 1",
            assumed_noise_scale=cfg.scenario.assumed_noise_scale,
        )
    workers = workers or SETMEMBER_THREADS
    tasks = campaign_tasks(cfg)
    logger.info(
        "Starting campaign",
        arms=[arm.label for arm in cfg.arms],
        nodes=cfg.nodes,
        runs_per_n=cfg.runs_per_n,
        workers=workers,
    )

    if workers > 1 and len(tasks) > 1:
        chunksize = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(execute_run, tasks, chunksize=chunksize))
    else:
        records = [execute_run(task) for task in tasks]

    failed = sum(record.status != "converged" for record in records)
    logger.info("Campaign finished", runs=len(records), failed=failed)
    return CampaignResult(config=cfg, records=records)
