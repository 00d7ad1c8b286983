from pathlib import Path
from typing import Optional

import typer

from setmember.api.dependencies.experiment import execute, load_experiment
from setmember.api.dependencies.options import (
    ConfigOption,
    DumpConfigOption,
    LogLevelOption,
    OutOption,
    SeedOption,
    cli_config,
)
from setmember.core.config import MANIFEST_FILE, TRAJECTORY_FILE
from setmember.core.errors import (
    EXIT_INFEASIBLE,
    EXIT_NO_CONVERGENCE,
    EXIT_OK,
    EmptySet,
    NoConvergence,
)
from setmember.core.hashing import config_hash
from setmember.schemas.cli import CliConfig
from setmember.schemas.results import Manifest
from setmember.services.estimation import EstimatorState, Mode, run_until, stopping_rule
from setmember.services.harness import reference_set
from setmember.services.network import build_network
from setmember.services.regression import scenario_from_config
from setmember.utils.io_utils import write_csv, write_json
from setmember.utils.logging import RunLogger


def cmd_run(cli: CliConfig) -> int:
    """
    Run one estimator on one scenario and write trajectory.csv plus manifest.json.

    Returns:
        EXIT_OK when the stopping rule fired, EXIT_NO_CONVERGENCE when the
        instant cap was reached first (or a projection did not converge), and
        EXIT_INFEASIBLE when a feasible set became empty. Only the manifest
        is written on failure.
    """
    experiment = load_experiment(cli)
    if cli.dump_config:
        typer.echo(experiment.model_dump_json(indent=2))
        return EXIT_OK

    estimator = experiment.estimator
    scenario = scenario_from_config(experiment.scenario)
    graph = weights = None
    if estimator.mode == Mode.DISTRIBUTED.value:
        graph, weights = build_network(experiment.network, scenario.nodes)
    state = EstimatorState.create(
        Mode(estimator.mode),
        scenario.initial_estimates,
        weights=weights,
        graph=graph,
        batched=estimator.onestep_batched,
    )
    reference = reference_set(estimator.reference, scenario, tol=estimator.dykstra_tol)
    stop = stopping_rule(estimator.stop, estimator.delta, estimator.max_steps)

    out_dir = Path(cli.output_dir)
    manifest = Manifest(
        command="run",
        seed=experiment.scenario.seed,
        config_hash=config_hash(experiment),
        status="running",
    )
    run_log = RunLogger(
        mode=estimator.mode, N=scenario.nodes, seed=experiment.scenario.seed
    )

    try:
        trajectory = run_until(
            state,
            scenario,
            stop,
            estimator.max_steps,
            reference=reference,
            record_estimates=estimator.record_estimates,
            logger=run_log,
        )
    except (EmptySet, NoConvergence) as e:
        infeasible = isinstance(e, EmptySet)
        manifest.status = "empty-set" if infeasible else "no-convergence"
        manifest.iterations = state.clock
        manifest.error = e.to_dict()
        write_json(out_dir / MANIFEST_FILE, manifest)
        run_log.error("Run failed", exception=e)
        return EXIT_INFEASIBLE if infeasible else EXIT_NO_CONVERGENCE

    header = trajectory.header()
    write_csv(out_dir / TRAJECTORY_FILE, header, trajectory.rows())

    converged = trajectory.status == "stopped"
    manifest.status = "converged" if converged else "no-stop"
    manifest.iterations = trajectory.stopped_at if converged else trajectory.steps
    manifest.final_distances = [float(d) for d in trajectory.final_distances]
    manifest.final_disagreement = trajectory.final_disagreement
    manifest.files = {TRAJECTORY_FILE: header}
    write_json(out_dir / MANIFEST_FILE, manifest)

    run_log.info(
        "Run finished",
        status=manifest.status,
        iterations=manifest.iterations,
        max_distance=max(manifest.final_distances),
    )
    return EXIT_OK if converged else EXIT_NO_CONVERGENCE


def run(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    seed: Optional[int] = SeedOption,
    log_level: Optional[str] = LogLevelOption,
    dump_config: bool = DumpConfigOption,
):
    """
    Run a single estimator and write its trajectory.
    """
    cli = cli_config("run", config, out, seed, log_level, dump_config)
    raise typer.Exit(execute(cmd_run, cli))
