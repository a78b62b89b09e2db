import numpy as np
import pytest

from bellman.candidate import BellmanCandidate
from bellman.verify import (
    EDGE_GAP,
    ZP_OFFSET,
    direction_samples,
    verification_grid,
    verify_all,
    verify_candidate_structure,
    verify_quadratic_form,
    verify_supersolution,
)
from utils.errors import DomainError, VerificationFailure

BELLMAN_P = [
    pytest.param(2.5, marks=pytest.mark.slow),
    pytest.param(3.0, marks=pytest.mark.slow),
    6.0,
    pytest.param(7.5, marks=pytest.mark.slow),
    12.0,
    pytest.param(20.0, marks=pytest.mark.slow),
    pytest.param(30.0, marks=pytest.mark.slow),
]


def test_verification_grid_avoids_the_zero():
    z = 0.3
    s = verification_grid(z, 500)
    assert z not in s
    assert z - ZP_OFFSET in s and z + ZP_OFFSET in s
    assert s[0] == pytest.approx(-1.0 + EDGE_GAP)
    assert s[-1] == pytest.approx(1.0 - EDGE_GAP)
    assert np.all(np.diff(s) > 0.0)


def test_verification_grid_minimum_size():
    with pytest.raises(DomainError):
        verification_grid(0.3, 99)


def test_direction_samples():
    u, b = direction_samples(64)
    assert u.shape == (33,) and b.shape == (32,)
    assert u[0] == 1.0 and u[-1] == pytest.approx(-1.0)
    assert b[0] == 0.0 and b[-1] == 1.0
    with pytest.raises(DomainError):
        direction_samples(3)


def test_supersolution_and_quadratic_form_p6(candidate6):
    checks = verify_supersolution(candidate6, 500) + verify_quadratic_form(candidate6, 500, 16)
    assert all(check.passed for check in checks), [c.name for c in checks if not c.passed]
    assert {c.name for c in checks} == {
        "supersolution_minus",
        "supersolution_plus",
        "legendre_branch_K",
        "quadratic_form",
        "quadratic_form_minus",
        "quadratic_form_plus",
        "quadratic_form_middle",
        "quadratic_form_k_zero",
    }


def test_structure_p6(candidate6):
    checks = verify_candidate_structure(candidate6, 500)
    assert all(check.passed for check in checks)


@pytest.mark.parametrize("p", BELLMAN_P)
def test_bellman_certification(p):
    report = verify_all(BellmanCandidate.for_p(p), grid_n=2000, dir_n=64, num_tol=1e-8)
    assert report.all_passed, report.failed_checks()
    report.raise_for_failure()


def test_report_fields(candidate12):
    report = verify_all(candidate12, grid_n=400, dir_n=16)
    assert report.p == 12.0
    assert report.override_c is None
    assert report.check("tangent_slope").passed
    assert report.check("tangent_at_inflection").passed
    assert report.check("quadratic_form").grid_size == 402


def test_constant_below_cp_is_not_a_majorant(consts6, sol6):
    candidate = BellmanCandidate(consts=consts6, sol=sol6, override_c=0.99 * consts6.c_p)
    report = verify_all(candidate, grid_n=400, dir_n=16)
    assert not report.all_passed
    failed = report.failed_checks()
    assert "finite_majorant_at_zp" in failed
    assert "majorization" in failed
    assert "tangent_slope" not in {c.name for c in report.checks}
    with pytest.raises(VerificationFailure) as excinfo:
        report.raise_for_failure()
    assert "majorization" in excinfo.value.failed


def test_num_tol_must_be_positive(candidate6):
    with pytest.raises(DomainError):
        verify_all(candidate6, grid_n=200, num_tol=0.0)


def test_quadratic_form_grid_can_differ(candidate12):
    report = verify_all(candidate12, grid_n=400, dir_n=16, quad_grid_n=300)
    assert report.check("supersolution_minus").grid_size == 402
    assert report.check("quadratic_form").grid_size == 302
    assert report.check("quadratic_form").passed
