import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths
BASE_DIR = Path(__file__).resolve().parent.parent.parent
ENV_FILE = BASE_DIR / ".env"

# Load environment variables
load_dotenv(ENV_FILE)

# Development settings
DEBUG = os.getenv("DEBUG", "False") == "True"
LOG_LEVEL = "DEBUG" if DEBUG else os.getenv("LOG_LEVEL", "INFO")
ENABLE_JSON_LOGS = os.getenv("ENABLE_JSON_LOGS", "").lower() == "true"

# Campaign parallelism (worker processes)
SETMEMBER_THREADS = max(1, int(os.getenv("SETMEMBER_THREADS", "1")))

# Geometry tolerances
MEMBERSHIP_TOL = 1e-9
UNIT_NORM_TOL = 1e-12
DYKSTRA_TOL = 1e-6
DYKSTRA_MAX_SWEEPS = 100_000
POLYTOPE_FEAS_TOL = 1e-12
POLYTOPE_MAX_ITERATIONS = 1_000

# Stationary vector (power iteration on A^T)
POWER_ITERATION_CAP = 100_000
POWER_ITERATION_TOL = 1e-10

# Experiment defaults (linear regression Monte Carlo setup)
DEFAULT_DIM = 5
DEFAULT_NODES = 7
DEFAULT_NOISE_BOUND_RANGE = (0.10, 0.13)
DEFAULT_THETA_RANGE = (-5.0, 5.0)
DEFAULT_INIT_RANGE = (-5.0, 5.0)
DEFAULT_REGRESSOR_RANGE = (0.0, 1.0)
DEFAULT_DELTA = 1e-3
DEFAULT_MAX_STEPS = 100_000
DEFAULT_CAMPAIGN_NODES = [7, 20, 100]
DEFAULT_RUNS_PER_N = 100

# Output files
OUTPUT_SCHEMA_VERSION = "1.0"
TRAJECTORY_FILE = "trajectory.csv"
MANIFEST_FILE = "manifest.json"
SUMMARY_FILE = "summary.csv"
RUNS_FILE = "runs.jsonl"
