import math

import numpy as np
import pytest

from utils.errors import VerificationFailure
from utils.reports import CheckResult, VerificationReport, make_check


def test_make_check_reports_the_worst_point():
    check = make_check("demo", 6.0, [0.1, 0.2, 0.3], [-1.0, 0.5, 0.2], tolerance=1.0)
    assert check.passed
    assert check.max_violation == 0.5
    assert check.location_of_max == 0.2
    assert check.grid_size == 3


def test_strict_checks():
    assert not make_check("demo", 6.0, [0.0], [0.0], strict=True).passed
    assert make_check("demo", 6.0, [0.0], [0.0]).passed


def test_non_finite_violations_fail():
    check = make_check("demo", 6.0, [0.1, 0.2], [0.0, np.nan], tolerance=1e3)
    assert not check.passed
    assert check.max_violation == math.inf
    assert check.location_of_max == 0.2


def test_location_is_dropped_when_sizes_differ():
    assert make_check("demo", 6.0, [0.1], [0.0, -1.0]).location_of_max is None


def _report() -> VerificationReport:
    return VerificationReport(
        p=6.0,
        alpha=2.5,
        z_p=0.57,
        c_p=3.7,
        checks=[
            make_check("good", 6.0, [0.0], [-1.0]),
            make_check("bad", 6.0, [0.0], [1.0]),
        ],
    )


def test_report_lookup_and_failures():
    report = _report()
    assert not report.all_passed
    assert report.failed_checks() == ["bad"]
    assert report.check("good").passed
    with pytest.raises(KeyError):
        report.check("missing")
    with pytest.raises(VerificationFailure) as excinfo:
        report.raise_for_failure()
    assert excinfo.value.failed == ["bad"]


def test_pass_alias():
    dumped = _report().model_dump(by_alias=True)
    assert dumped["checks"][0]["pass"] is True
    assert "passed" not in dumped["checks"][0]
    restored = CheckResult.model_validate(dumped["checks"][1])
    assert restored.passed is False
