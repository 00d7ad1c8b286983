from typing import Sequence

import click
import typer

from setmember.api.commands import campaign as campaign_command
from setmember.api.commands import run as run_command
from setmember.api.commands import validate as validate_command
from setmember.api.dependencies.options import cli_config
from setmember.schemas.cli import CliConfig

# Create Typer app
app = typer.Typer(
    name="setmember",
    help="Incremental and distributed set-membership estimation over sensor networks.",
    add_completion=False,
    no_args_is_help=True,
)

# Commands
app.command("run")(run_command.run)
app.command("campaign")(campaign_command.campaign)
app.command("validate")(validate_command.validate)


def parse_args(argv: Sequence[str]) -> CliConfig:
    """
    Parse a command line into a CliConfig without running the command.

    Raises:
        click.UsageError: Missing or unknown command, unknown flags or bad
            values; its exit code is 2.
    """
    argv = list(argv)
    if not argv:
        raise click.UsageError("missing command; expected run, campaign or validate")
    group = typer.main.get_command(app)
    with group.make_context("setmember", argv) as ctx:
        name, command, args = group.resolve_command(ctx, [*ctx.protected_args, *ctx.args])
        with command.make_context(name, args, parent=ctx) as sub_ctx:
            params = sub_ctx.params
    return cli_config(
        name,
        params["config"],
        params["out"],
        params["seed"],
        params["log_level"],
        params["dump_config"],
    )


def main() -> None:
    app()


if __name__ == "__main__":
    main()
