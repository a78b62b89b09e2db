"""Report models shared by the lemma suite and the Bellman verification."""

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from utils.errors import VerificationFailure


class CheckResult(BaseModel):
    """Outcome of one numerical check.

    ``max_violation`` is the largest value, over the check's grid, of a quantity
    that must stay below ``tolerance`` (strictly below it for strict checks).
    """

    model_config = ConfigDict(populate_by_name=True)

    name: str
    p: float
    grid_size: int
    max_violation: float
    tolerance: float = 0.0
    location_of_max: Optional[float] = None
    passed: bool = Field(alias="pass")


class VerificationReport(BaseModel):
    """A bundle of checks for one exponent p."""

    model_config = ConfigDict(populate_by_name=True)

    p: float
    alpha: float
    z_p: float
    c_p: float
    a_p: Optional[float] = None
    i_p: Optional[float] = None
    override_c: Optional[float] = None
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed_checks(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def check(self, name: str) -> CheckResult:
        """Look up a check by name.

        Raises:
            KeyError: If no check has that name
        """
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(f"no check named {name!r}. Valid options: {[c.name for c in self.checks]}")

    def raise_for_failure(self) -> None:
        failed = self.failed_checks()
        if failed:
            raise VerificationFailure(f"p={self.p}: {len(failed)} check(s) failed: {', '.join(failed)}", failed)


def make_check(
    name: str,
    p: float,
    grid: np.ndarray,
    violations: np.ndarray,
    tolerance: float = 0.0,
    strict: bool = False,
) -> CheckResult:
    """Reduce pointwise violations to a CheckResult.

    Non-finite violations count as failures.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    violations = np.atleast_1d(np.asarray(violations, dtype=float))
    bad = ~np.isfinite(violations)
    if bad.any():
        i = int(np.argmax(bad))
        worst = math.inf
    else:
        i = int(np.argmax(violations))
        worst = float(violations[i])
    passed = worst < tolerance if strict else worst <= tolerance
    location = float(grid[i]) if grid.size == violations.size else None
    return CheckResult(
        name=name,
        p=p,
        grid_size=int(violations.size),
        max_violation=worst,
        tolerance=tolerance,
        location_of_max=location,
        passed=passed,
    )
