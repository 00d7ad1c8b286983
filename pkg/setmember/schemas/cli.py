from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

Command = Literal["run", "campaign", "validate"]
Verbosity = Literal["DEBUG", "INFO", "WARNING", "ERROR"]


class CliConfig(BaseModel):
    """
    Parsed command line.

    Attributes:
        command (str): run, campaign or validate.
        config_path (Path): Experiment config file; None uses the defaults.
        output_dir (Path): Directory the output files are written to.
        seed (int): Overrides the scenario and campaign seeds when given.
        verbosity (str): Log level; None defers to LOG_LEVEL.
        dump_config (bool): Print the resolved config and exit.
    """

    model_config = ConfigDict(frozen=True)

    command: Command
    config_path: Optional[Path] = None
    output_dir: Path = Path("results")
    seed: Optional[int] = None
    verbosity: Optional[Verbosity] = None
    dump_config: bool = False
