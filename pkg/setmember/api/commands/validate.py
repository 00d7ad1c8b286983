from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from setmember.api.dependencies.experiment import execute, load_experiment
from setmember.api.dependencies.options import (
    ConfigOption,
    DumpConfigOption,
    LogLevelOption,
    OutOption,
    SeedOption,
    cli_config,
)
from setmember.core.errors import EXIT_OK, EXIT_USAGE
from setmember.schemas.cli import CliConfig
from setmember.schemas.validation import WeightReport
from setmember.services.network import build_network, validate_weights

console = Console()


def report_table(report: WeightReport) -> Table:
    table = Table(title="Consensus assumptions")
    table.add_column("check")
    table.add_column("result")
    table.add_column("detail")
    for name, ok in report.checks.items():
        table.add_row(
            name,
            "[green]pass[/green]" if ok else "[red]fail[/red]",
            escape(report.details.get(name, "")),
        )
    return table


def cmd_validate(cli: CliConfig) -> int:
    """
    Check the configured network (topology and weights for `scenario.nodes`
    nodes) and print a pass/fail line per assumption. Exits 0 iff all pass.
    """
    experiment = load_experiment(cli)
    if cli.dump_config:
        typer.echo(experiment.model_dump_json(indent=2))
        return EXIT_OK

    graph, weights = build_network(experiment.network, experiment.scenario.nodes)
    report = validate_weights(graph, weights)
    console.print(report_table(report))
    if report:
        console.print("[green]all checks passed[/green]")
        return EXIT_OK
    console.print(f"[red]failed:[/red] {', '.join(report.violations)}")
    return EXIT_USAGE


def validate(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    seed: Optional[int] = SeedOption,
    log_level: Optional[str] = LogLevelOption,
    dump_config: bool = DumpConfigOption,
):
    """
    Check the network's weights against the consensus assumptions.
    """
    cli = cli_config("validate", config, out, seed, log_level, dump_config)
    raise typer.Exit(execute(cmd_validate, cli))
