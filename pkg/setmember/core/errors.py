"""
Exception hierarchy for the set-membership estimator.

Library code raises these; only the command layer turns them into exit codes.
"""

from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_INFEASIBLE = 4


class SetMemberError(Exception):
    """Base error. `exit_code` is the process exit status the CLI reports."""

    exit_code: int = EXIT_IO

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail: Dict[str, Any] = detail

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.detail}


class EmptySet(SetMemberError):
    """A feasible set became empty (noise bound violated)."""

    exit_code = EXIT_INFEASIBLE

    def __init__(
        self,
        message: str = "feasible set is empty",
        node: Optional[int] = None,
        instant: Optional[int] = None,
    ):
        super().__init__(message, node=node, instant=instant)
        self.node = node
        self.instant = instant


class DimensionMismatch(SetMemberError, ValueError):
    exit_code = EXIT_USAGE


class InvalidGeometry(SetMemberError, ValueError):
    exit_code = EXIT_USAGE


class NoConvergence(SetMemberError):
    exit_code = EXIT_NO_CONVERGENCE


class InvalidSize(SetMemberError, ValueError):
    exit_code = EXIT_USAGE


class InvalidGraph(SetMemberError, ValueError):
    exit_code = EXIT_USAGE


class AsymmetricGraph(InvalidGraph):
    pass


class BatchSizeMismatch(SetMemberError, ValueError):
    exit_code = EXIT_USAGE


class WrongNode(SetMemberError, ValueError):
    exit_code = EXIT_USAGE


class InvalidConfig(SetMemberError, ValueError):
    exit_code = EXIT_USAGE


class OutputError(SetMemberError):
    exit_code = EXIT_IO


class ModeMismatch(SetMemberError, ValueError):
    """A step rule was applied to an estimator configured for another mode."""

    exit_code = EXIT_USAGE
