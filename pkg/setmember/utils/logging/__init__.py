"""
Logging utilities for the set-membership simulator.
"""

from setmember.utils.logging.config import configure_logging, get_logger
from setmember.utils.logging.run_logger import RunLogger

__all__ = ["configure_logging", "get_logger", "RunLogger"]
