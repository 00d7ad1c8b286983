from typing import Dict, List

from pydantic import BaseModel, Field

CHECK_NAMES = (
    "dimensions",
    "nonnegative",
    "positive diagonal",
    "edge support",
    "row-stochastic",
    "strongly connected",
)


class WeightReport(BaseModel):
    """
    Outcome of checking a graph and weight matrix against the consensus assumptions.

    Attributes:
        checks (Dict[str, bool]): Pass/fail per named condition, in check order.
        violations (List[str]): Names of the failed conditions.
        details (Dict[str, str]): Human-readable explanation per violation.
    """

    checks: Dict[str, bool] = Field(default_factory=dict)
    violations: List[str] = Field(default_factory=list)
    details: Dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = ok
        if not ok:
            self.violations.append(name)
            if detail:
                self.details[name] = detail
