"""Grid certification of the Bellman candidate.

Every "<= 0" check accepts values up to num_tol * scale with
scale = 1 + |g| + |g'| + |g''| at the same point. Within ENDPOINT_BAND of
s = +-1 the checks use the forms multiplied by 1 - s^2.
"""

import math
from typing import List, Optional

import numpy as np
from scipy.differentiate import derivative

from bellman.candidate import BellmanCandidate, CandidateJets
from bellman.operators import D_op, Dtilde_cleared, Dtilde_op, K_op, QuadFormCoeffs
from specfun.legendre import legendre_f1_values
from utils.errors import DomainError
from utils.log import log_debug, log_info
from utils.reports import CheckResult, VerificationReport, make_check

DEFAULT_NUM_TOL = 1e-8
DEFAULT_GRID = 2000
DEFAULT_DIRECTIONS = 64
EDGE_GAP = 1e-6
ENDPOINT_BAND = 1e-3
# one-sided points next to z_p
ZP_OFFSET = 1e-9
TOUCHING_TOL = 1e-9
JUMP_TOL = 1e-9
SLOPE_RTOL = 1e-9


def verification_grid(z: float, grid_n: int) -> np.ndarray:
    """Even grid of [-1 + 1e-6, 1 - 1e-6] with z replaced by z -+ 1e-9."""
    if grid_n < 100:
        raise DomainError(f"grid_n must be >= 100, got {grid_n}")
    s = np.linspace(-1.0 + EDGE_GAP, 1.0 - EDGE_GAP, grid_n)
    s = s[np.abs(s - z) > ZP_OFFSET]
    return np.sort(np.concatenate([s, [z - ZP_OFFSET, z + ZP_OFFSET]]))


def direction_samples(dir_n: int) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev-Lobatto cosines u in [-1, 1] and even ratios b in [0, 1].

    dir_n = 64 gives 33 values of u and 32 values of b.
    """
    if dir_n < 4:
        raise DomainError(f"dir_n must be >= 4, got {dir_n}")
    n_u = dir_n // 2 + 1
    u = np.cos(np.pi * np.arange(n_u) / (n_u - 1))
    b = np.linspace(0.0, 1.0, dir_n // 2)
    return u, b


def _near_edge(s: np.ndarray) -> np.ndarray:
    return np.abs(s) > 1.0 - ENDPOINT_BAND


def _quad_coeffs(p: float, jets: CandidateJets) -> QuadFormCoeffs:
    plain = QuadFormCoeffs.from_jet(p, jets.s, jets.g, jets.g1, jets.g2)
    cleared = QuadFormCoeffs.cleared_from_jet(p, jets.s, jets.g, jets.g1, jets.g2)
    edge = _near_edge(jets.s)
    return QuadFormCoeffs(
        s=jets.s,
        phi_xx=np.where(edge, cleared.phi_xx, plain.phi_xx),
        phi_yy=np.where(edge, cleared.phi_yy, plain.phi_yy),
        phi_xy=np.where(edge, cleared.phi_xy, plain.phi_xy),
        phi_x_over_x=np.where(edge, cleared.phi_x_over_x, plain.phi_x_over_x),
        phi_y_over_y=np.where(edge, cleared.phi_y_over_y, plain.phi_y_over_y),
    )


def verify_supersolution(
    candidate: BellmanCandidate,
    grid_n: int = DEFAULT_GRID,
    num_tol: float = DEFAULT_NUM_TOL,
    jets: Optional[CandidateJets] = None,
) -> List[CheckResult]:
    """D g_p <= 0 and D~g_p <= 0 on the grid, plus -K g_p >= 0 on the Legendre branch."""
    p = candidate.p
    if jets is None:
        jets = candidate.jet_values(verification_grid(candidate.consts.z_p, grid_n))
    s, scale = jets.s, jets.scale

    dg = D_op(p, s, jets.g, jets.g1, jets.g2)
    dtilde = np.where(
        _near_edge(s),
        Dtilde_cleared(p, s, jets.g, jets.g1, jets.g2),
        Dtilde_op(p, s, jets.g, jets.g1, jets.g2),
    )
    k = K_op(p, s, jets.g, jets.g1, jets.g2)
    right = jets.legendre_branch
    return [
        make_check("supersolution_minus", p, s, dg / scale, tolerance=num_tol),
        make_check("supersolution_plus", p, s, dtilde / scale, tolerance=num_tol),
        make_check("legendre_branch_K", p, s[right], (k / scale)[right], tolerance=num_tol),
    ]


def verify_quadratic_form(
    candidate: BellmanCandidate,
    grid_n: int = DEFAULT_GRID,
    dir_n: int = DEFAULT_DIRECTIONS,
    num_tol: float = DEFAULT_NUM_TOL,
    jets: Optional[CandidateJets] = None,
) -> List[CheckResult]:
    """A |h|^2 + 2 B (h . k) + C |k|^2 <= 0 for |k| <= |h| on grid x directions.

    Also reports the analytic conditions at u = -1 and u = +1 with |k| = |h|,
    the root condition where the discriminant is nonnegative, and A <= 0
    (the k = 0 direction).
    """
    p = candidate.p
    if jets is None:
        jets = candidate.jet_values(verification_grid(candidate.consts.z_p, grid_n))
    s, scale = jets.s, jets.scale
    coeffs = _quad_coeffs(p, jets)

    u, b = direction_samples(dir_n)
    form = coeffs.evaluate(u, b) / scale[:, None, None]
    worst = form.reshape(len(s), -1).max(axis=1)

    middle = coeffs.middle_residual()
    middle = np.where(np.isfinite(middle), middle, 0.0) / scale
    return [
        make_check("quadratic_form", p, s, worst, tolerance=num_tol),
        make_check("quadratic_form_minus", p, s, (coeffs.A - 2.0 * coeffs.B + coeffs.C) / scale, tolerance=num_tol),
        make_check("quadratic_form_plus", p, s, (coeffs.A + 2.0 * coeffs.B + coeffs.C) / scale, tolerance=num_tol),
        make_check("quadratic_form_middle", p, s, middle, tolerance=num_tol),
        make_check("quadratic_form_k_zero", p, s, coeffs.A / scale, tolerance=num_tol),
    ]


def verify_candidate_structure(
    candidate: BellmanCandidate,
    grid_n: int = DEFAULT_GRID,
    num_tol: float = DEFAULT_NUM_TOL,
) -> List[CheckResult]:
    """Continuity, C^1 matching, majorisation of h_c and the g'' jump at z_p."""
    p, z = candidate.p, candidate.consts.z_p
    left = candidate.jet(z, "left")
    right = candidate.jet(z, "right")

    s = np.linspace(-1.0, 1.0, grid_n)
    g = np.array([candidate.value(float(x)) for x in s])
    h = candidate.obstacle.value(s)
    majorant_gap = (h - g) / (1.0 + np.abs(g))

    return [
        make_check("continuity_at_zp", p, [z], [abs(right[0] - left[0])], tolerance=TOUCHING_TOL),
        make_check("c1_matching_at_zp", p, [z], [abs(right[1] - left[1])], tolerance=TOUCHING_TOL),
        make_check("majorization", p, s, majorant_gap, tolerance=num_tol),
        make_check("finite_majorant_at_zp", p, [z], [candidate.obstacle.value(z)], tolerance=TOUCHING_TOL),
        make_check("second_derivative_jump", p, [z], [left[2] - right[2]], tolerance=JUMP_TOL),
    ]


def verify_tangent_separation(
    candidate: BellmanCandidate,
    grid_n: int = DEFAULT_GRID,
    num_tol: float = DEFAULT_NUM_TOL,
) -> List[CheckResult]:
    """The tangent line of h_c at z_p separates a_p f1 from h_c on (z_p, 1).

    For c = c_p the slope is p ((1 + z_p)/2)^(p-1) / (1 - z_p), checked
    against a numerical derivative of h_c.
    """
    p, z = candidate.p, candidate.consts.z_p
    h = candidate.obstacle
    slope = float(h.first(z))

    def tangent(x):
        return h.value(z) + slope * (x - z)

    s = np.linspace(z, 1.0, grid_n + 1)[1:-1]
    f1, _ = legendre_f1_values(candidate.sol, s)
    upper = candidate.amplitude * f1
    line = tangent(s)
    scale = 1.0 + np.abs(upper)
    checks = [
        make_check("tangent_below_candidate", p, s, (line - upper) / scale, tolerance=num_tol),
        make_check("tangent_above_obstacle", p, s, (h.value(s) - line) / scale, tolerance=num_tol),
        make_check("tangent_at_one", p, [1.0], [1.0 - tangent(1.0)], tolerance=num_tol),
    ]
    i_p = candidate.consts.i_p
    if candidate.override_c is None and i_p is not None:
        closed_form = p * ((1.0 + z) / 2.0) ** (p - 1.0) / (1.0 - z)
        numeric = derivative(h.value, z, initial_step=min(1e-3, (1.0 - z) / 4.0), tolerances={"rtol": 1e-12})
        slope_gap = abs(float(numeric.df) - closed_form) / max(1.0, abs(closed_form))
        checks.append(make_check("tangent_slope", p, [z], [slope_gap], tolerance=SLOPE_RTOL))
        checks.append(make_check("tangent_at_inflection", p, [i_p], [h.value(i_p) - tangent(i_p)], strict=True))
    return checks


def verify_all(
    candidate: BellmanCandidate,
    grid_n: int = DEFAULT_GRID,
    dir_n: int = DEFAULT_DIRECTIONS,
    num_tol: float = DEFAULT_NUM_TOL,
    quad_grid_n: Optional[int] = None,
) -> VerificationReport:
    """Every Bellman check for one candidate.

    The supersolution and quadratic-form checks share one grid of jets unless
    quad_grid_n asks for a different size of the quadratic-form grid.
    """
    if not num_tol > 0.0:
        raise DomainError(f"num_tol must be positive, got {num_tol}")
    consts = candidate.consts
    jets = candidate.jet_values(verification_grid(consts.z_p, grid_n))
    quad_jets = jets
    if quad_grid_n is not None and quad_grid_n != grid_n:
        quad_jets = candidate.jet_values(verification_grid(consts.z_p, quad_grid_n))
    checks: List[CheckResult] = []
    checks += verify_candidate_structure(candidate, grid_n, num_tol)
    checks += verify_supersolution(candidate, grid_n, num_tol, jets)
    checks += verify_quadratic_form(candidate, quad_grid_n or grid_n, dir_n, num_tol, quad_jets)
    checks += verify_tangent_separation(candidate, grid_n, num_tol)

    report = VerificationReport(
        p=consts.p,
        alpha=consts.alpha,
        z_p=consts.z_p,
        c_p=consts.c_p,
        a_p=consts.a_p,
        i_p=consts.i_p,
        override_c=candidate.override_c,
        checks=checks,
    )
    failed = report.failed_checks()
    if failed:
        log_info(f"p={consts.p}: failed checks {', '.join(failed)}")
    worst = max((c.max_violation for c in checks if math.isfinite(c.max_violation)), default=0.0)
    log_debug(f"verify_all p={consts.p}: {len(checks)} checks, largest finite violation {worst:.3g}")
    return report
