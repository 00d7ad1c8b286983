"""
Options shared by every command.
"""

from pathlib import Path
from typing import Optional

import click
import typer

from setmember.schemas.cli import CliConfig

VERBOSITY_CHOICES = click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False)

ConfigOption = typer.Option(
    None,
    "--config",
    "-c",
    help="Experiment config (JSON). Defaults reproduce the reference setup.",
)
OutOption = typer.Option(Path("results"), "--out", "-o", help="Output directory.")
SeedOption = typer.Option(
    None, "--seed", min=0, help="Override the scenario and campaign seeds."
)
LogLevelOption = typer.Option(
    None, "--log-level", click_type=VERBOSITY_CHOICES, help="Log level."
)
DumpConfigOption = typer.Option(
    False, "--dump-config", help="Print the resolved config as JSON and exit."
)


def cli_config(
    command: str,
    config: Optional[Path],
    out: Path,
    seed: Optional[int],
    log_level: Optional[str],
    dump_config: bool,
) -> CliConfig:
    return CliConfig(
        command=command,
        config_path=config,
        output_dir=out,
        seed=seed,
        verbosity=log_level.upper() if log_level else None,
        dump_config=dump_config,
    )
