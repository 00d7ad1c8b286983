import logging
from typing import Callable

from rich.console import Console
from rich.markup import escape

from setmember.core.config import ENABLE_JSON_LOGS, LOG_LEVEL
from setmember.core.errors import EXIT_IO, SetMemberError
from setmember.schemas.cli import CliConfig
from setmember.schemas.config import ExperimentConfig
from setmember.utils.logging import configure_logging

logger = logging.getLogger(__name__)

err_console = Console(stderr=True)


def load_experiment(cli: CliConfig) -> ExperimentConfig:
    """
    Experiment config named on the command line, with the seed override applied.

    Raises:
        OSError: If the config file cannot be read.
        InvalidConfig: If the document is malformed.
    """
    if cli.config_path is None:
        experiment = ExperimentConfig()
    else:
        experiment = ExperimentConfig.load(cli.config_path)
    return experiment.with_seed(cli.seed)


def execute(handler: Callable[[CliConfig], int], cli: CliConfig) -> int:
    """
    Run a command handler and turn library errors into exit codes.

    Returns:
        The handler's exit code, the error's exit code for SetMemberError,
        or EXIT_IO for file system errors.
    """
    configure_logging(
        log_level=cli.verbosity or LOG_LEVEL, enable_json_logs=ENABLE_JSON_LOGS
    )
    try:
        return handler(cli)
    except SetMemberError as e:
        logger.error("%s failed: %s", cli.command, e.message)
        err_console.print(f"[red]error:[/red] {escape(e.message)}")
        for key, value in e.detail.items():
            err_console.print(f"  {key}: {escape(str(value))}")
        return e.exit_code
    except OSError as e:
        logger.error("%s failed: %s", cli.command, str(e))
        err_console.print(f"[red]error:[/red] {escape(str(e))}")
        return EXIT_IO
