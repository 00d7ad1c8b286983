from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from setmember.core.config import OUTPUT_SCHEMA_VERSION

RunStatus = Literal["converged", "no-stop", "empty-set", "no-convergence"]


class RunRecord(BaseModel):
    """
    One Monte Carlo run, emitted as a line of runs.jsonl.

    Attributes:
        arm (str): Campaign arm label (e.g. "ring").
        mode (str): Estimator mode of the arm.
        N (int): Number of nodes.
        run (int): Run index within the (arm, N) cell.
        seed (int): Scenario seed derived from (campaign seed, N, run).
        iterations (int): Instants taken until the stopping rule fired, or the
            instant at which the run stopped early.
        status (str): converged, no-stop, empty-set or no-convergence.
        final_disagreement (float): max_{i,j} ||x_i - x_j|| at the last instant.
        error (dict): Failure detail (node, instant) when status is a failure.
    """

    arm: str
    mode: str
    N: int
    run: int
    seed: int
    iterations: int
    status: RunStatus
    final_disagreement: Optional[float] = None
    error: Optional[Dict[str, Any]] = None


class SummaryRow(BaseModel):
    """
    One row of summary.csv.

    `mean` and `std` (population) cover converged runs only; `failures` counts
    every non-converged run and `censored` the subset that hit max_steps.
    """

    mode: str
    N: int
    mean: Optional[float]
    std: Optional[float]
    failures: int
    censored: int
    runs: int


class Manifest(BaseModel):
    """run/campaign manifest.json; documents which files were written and their schema."""

    schema_version: str = OUTPUT_SCHEMA_VERSION
    command: Literal["run", "campaign"]
    seed: int
    config_hash: str
    status: str
    iterations: Optional[int] = None
    final_distances: Optional[List[float]] = None
    final_disagreement: Optional[float] = None
    error: Optional[Dict[str, Any]] = None
    files: Dict[str, List[str]] = Field(default_factory=dict)
