from pathlib import Path
from typing import List, Optional

import typer
from rich.console import Console
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
from setmember.core.config import MANIFEST_FILE, RUNS_FILE, SUMMARY_FILE
from setmember.core.errors import EXIT_OK
from setmember.core.hashing import config_hash
from setmember.schemas.cli import CliConfig
from setmember.schemas.results import Manifest, RunRecord, SummaryRow
from setmember.services.harness import (
    SUMMARY_COLUMNS,
    run_campaign,
    summarize,
    summary_rows,
)
from setmember.utils.io_utils import write_csv, write_json, write_jsonl

console = Console()


def _format(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.1f}"


def summary_table(rows: List[SummaryRow]) -> Table:
    table = Table(title="Average number of iterations")
    for column in SUMMARY_COLUMNS:
        table.add_column(column, justify="left" if column == "mode" else "right")
    for row in rows:
        table.add_row(
            row.mode,
            str(row.N),
            _format(row.mean),
            _format(row.std),
            str(row.failures),
            str(row.censored),
        )
    return table


def cmd_campaign(cli: CliConfig) -> int:
    """
    Run the Monte Carlo campaign and write summary.csv, runs.jsonl and manifest.json.
    Individual run failures are part of the results, so this exits 0.
    """
    experiment = load_experiment(cli)
    if cli.dump_config:
        typer.echo(experiment.model_dump_json(indent=2))
        return EXIT_OK

    cfg = experiment.campaign_config()
    result = run_campaign(cfg)
    rows = summarize(result)

    out_dir = Path(cli.output_dir)
    write_csv(out_dir / SUMMARY_FILE, SUMMARY_COLUMNS, summary_rows(rows))
    write_jsonl(out_dir / RUNS_FILE, result.records)
    write_json(
        out_dir / MANIFEST_FILE,
        Manifest(
            command="campaign",
            seed=cfg.seed,
            config_hash=config_hash(experiment),
            status="completed",
            files={
                SUMMARY_FILE: list(SUMMARY_COLUMNS),
                RUNS_FILE: list(RunRecord.model_fields),
            },
        ),
    )

    console.print(summary_table(rows))
    return EXIT_OK


def campaign(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    seed: Optional[int] = SeedOption,
    log_level: Optional[str] = LogLevelOption,
    dump_config: bool = DumpConfigOption,
):
    """
    Run a Monte Carlo campaign and summarize iteration counts per arm and N.
    """
    cli = cli_config("campaign", config, out, seed, log_level, dump_config)
    raise typer.Exit(execute(cmd_campaign, cli))
