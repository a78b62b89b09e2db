"""Numerical checks of the monotonicity, bound and zero lemmas behind c_p.

Each check returns a CheckResult; run_lemma_suite bundles them into a
VerificationReport for one p.
"""

import math
from typing import Callable, List, Optional

import numpy as np
from scipy.differentiate import derivative

from bellman.obstacle import Obstacle
from sharp_constant.constants import (
    SharpConstants,
    a_fn,
    beta_fn,
    compute_sharp_constants,
    log_beta,
    touching_residuals,
)
from specfun.legendre import (
    DEFAULT_ZERO_TOL,
    LegendreSolution,
    evaluate_series,
    legendre_f1,
    legendre_f1_derivatives,
    legendre_f1_values,
    legendre_f2,
    legendre_f2_values,
)
from specfun.roots import rightmost_sign_change
from utils.errors import VerificationFailure
from utils.log import log_debug
from utils.reports import CheckResult, VerificationReport, make_check

# all [z_p, 1) grids stop here
GRID_RIGHT = 1.0 - 1e-6
# right end of the grids where beta and a must be strictly monotone
MONOTONE_RIGHT = 1.0 - 1e-4
TOUCHING_TOL = 1e-9
ZERO_MINIMALITY_LEFT = -0.9
ZERO_MINIMALITY_SLACK = 1e-6
LOG_SINGULARITY_EPS = (1e-3, 1e-4, 1e-5)
# scales a of the finite candidates a f1 tried against h_c
MAJORANT_SCALES = np.logspace(-3.0, 6.0, 91)
# h_c with c this far below c_p must have no finite majorant
BELOW_CP = 0.99
# f1 must already be negative this far left of z_p
ZERO_BRACKET_OFFSET = 1e-6


def _vectorize(func: Callable[[float], float]) -> Callable[[np.ndarray], np.ndarray]:
    return np.vectorize(func, otypes=[float])


def check_zero_bracket(consts: SharpConstants, sol: LegendreSolution, grid_n: int = 200) -> CheckResult:
    """f1 changes sign at z_p and stays positive on (z_p, 1]."""
    z = consts.z_p
    grid = np.linspace(z, 1.0, grid_n + 1)[1:]
    f, _ = legendre_f1_values(sol, grid)
    sign_change = legendre_f1(sol, max(z - ZERO_BRACKET_OFFSET, -1.0 + sol.radius_guard)) < 0.0
    violations = -f
    if not sign_change:
        violations = np.append(violations, math.inf)
        grid = np.append(grid, z)
    return make_check("f1_positive_right_of_zp", consts.p, grid, violations, strict=True)


def check_zp_estimate(consts: SharpConstants) -> CheckResult:
    """(1 + z_p)/2 >= p/(p + 2), strictly for p > 2."""
    p = consts.p
    violation = p / (p + 2.0) - (1.0 + consts.z_p) / 2.0
    strict = p > 2.0
    return make_check("zp_estimate", p, [consts.z_p], [violation], tolerance=0.0 if strict else 1e-12, strict=strict)


def check_ellp(consts: SharpConstants) -> CheckResult:
    """p ((1 + z_p)/2)^(p-1) >= 1."""
    p = consts.p
    violation = 1.0 - p * ((1.0 + consts.z_p) / 2.0) ** (p - 1.0)
    return make_check("ellp", p, [consts.z_p], [violation], tolerance=1e-12)


def check_slope_at_zero(consts: SharpConstants, sol: LegendreSolution) -> CheckResult:
    """f1'(z_p) > 0."""
    slope = legendre_f1_derivatives(sol, consts.z_p)[1]
    return make_check("f1_prime_positive_at_zp", consts.p, [consts.z_p], [-slope], strict=True)


def check_convexity(consts: SharpConstants, sol: LegendreSolution, grid_n: int = 500) -> CheckResult:
    """f1'' > 0 on [z_p, 1), second derivative from the series itself."""
    grid = np.linspace(consts.z_p, GRID_RIGHT, grid_n)
    second = np.array([evaluate_series(sol, float(s)).second for s in grid])
    return make_check("f1_convex_on_zp_1", consts.p, grid, -second, strict=True)


def check_beta_increasing(consts: SharpConstants, sol: LegendreSolution, grid_n: int = 200) -> CheckResult:
    """beta strictly increasing on [z_p, 1 - 1e-4], compared through log beta."""
    grid = np.linspace(consts.z_p, MONOTONE_RIGHT, grid_n)
    values = np.array([log_beta(consts.p, float(x), sol) for x in grid])
    return make_check("beta_increasing", consts.p, grid[1:], -np.diff(values), strict=True)


def check_beta_at_zero(consts: SharpConstants, sol: LegendreSolution) -> CheckResult:
    """beta(z_p) = c_p^p, relative residual."""
    p = consts.p
    residual = abs(beta_fn(p, consts.z_p, sol) / consts.c_p**p - 1.0)
    return make_check("beta_at_zp", p, [consts.z_p], [residual], tolerance=1e-9)


def check_a_decreasing(consts: SharpConstants, sol: LegendreSolution, grid_n: int = 200) -> CheckResult:
    """a strictly decreasing on [z_p, 1 - 1e-4]."""
    grid = np.linspace(consts.z_p, MONOTONE_RIGHT, grid_n)
    values = np.array([a_fn(consts.p, float(x), sol) for x in grid])
    return make_check("a_decreasing", consts.p, grid[1:], np.diff(values), strict=True)


def check_a_above_one(consts: SharpConstants) -> CheckResult:
    """a_p > 1."""
    assert consts.a_p is not None
    return make_check("a_p_above_one", consts.p, [consts.z_p], [1.0 - consts.a_p], strict=True)


def check_touching(consts: SharpConstants, sol: LegendreSolution) -> CheckResult:
    """a_p f1 and h_{c_p} share value and slope at z_p."""
    value_gap, slope_gap = touching_residuals(consts, sol)
    return make_check(
        "touching_at_zp", consts.p, [consts.z_p, consts.z_p], [value_gap, slope_gap], tolerance=TOUCHING_TOL
    )


def check_inflection(consts: SharpConstants) -> CheckResult:
    """z_p < i_p < 1, h_{c_p}''(i_p) = 0 and c_p^p = ((1+i_p)/(1-i_p))^(p-2)."""
    assert consts.i_p is not None
    p, i = consts.p, consts.i_p
    h = consts.obstacle
    scale = 1.0 + abs(h.value(i)) + abs(h.first(i))
    violations = [
        consts.z_p - i,
        i - 1.0,
        abs(h.second(i)) / scale - TOUCHING_TOL,
        abs(((1.0 + i) / (1.0 - i)) ** (p - 2.0) / consts.c_p**p - 1.0) - TOUCHING_TOL,
    ]
    return make_check("inflection_point", p, [i] * 4, violations, strict=True)


def check_beta_derivative_sign(consts: SharpConstants, sol: LegendreSolution, grid_n: int = 50) -> CheckResult:
    """beta' and f1 f1'' are both positive on (z_p, 1)."""
    p = consts.p
    grid = np.linspace(consts.z_p, MONOTONE_RIGHT, grid_n + 2)[1:-1]
    step = 0.25 * np.minimum(grid - consts.z_p, 1.0 - grid)
    res = derivative(_vectorize(lambda x: log_beta(p, x, sol)), grid, initial_step=step, step_factor=2.0, maxiter=5)
    product = np.array([legendre_f1(sol, float(x)) * evaluate_series(sol, float(x)).second for x in grid])
    # beta > 0, so beta' and (log beta)' share their sign
    agree = (np.sign(res.df) == np.sign(product)) & (product > 0.0)
    return make_check("beta_prime_sign", p, grid, np.where(agree, 0.0, 1.0))


def check_f2_negative_at_zero(consts: SharpConstants, sol: LegendreSolution) -> CheckResult:
    """f2(z_p) < 0."""
    value, _ = legendre_f2(sol, consts.z_p)
    return make_check("f2_negative_at_zp", consts.p, [consts.z_p], [value], strict=True)


def check_log_singularity(consts: SharpConstants, sol: LegendreSolution) -> CheckResult:
    """f2(1 - eps) / log(1/eps) approaches 1 monotonically as eps decreases."""
    eps = np.array(LOG_SINGULARITY_EPS)
    f2, _ = legendre_f2_values(sol, 1.0 - eps)
    gaps = np.abs(f2 / np.log(1.0 / eps) - 1.0)
    return make_check("f2_log_singularity", consts.p, 1.0 - eps[1:], np.diff(gaps), strict=True)


def check_wronskian(consts: SharpConstants, sol: LegendreSolution) -> CheckResult:
    """(f2' f1 - f1' f2)(x) (1 - x) tends to a nonzero constant as x -> 1."""
    xs = 1.0 - np.array(LOG_SINGULARITY_EPS)
    f1, f1p = legendre_f1_values(sol, xs)
    f2, f2p = legendre_f2_values(sol, xs)
    scaled = (f2p * f1 - f1p * f2) * (1.0 - xs)
    spread = np.abs(np.diff(scaled)) / np.abs(scaled[1:])
    violations = np.where(np.abs(scaled[1:]) > 0.0, spread, math.inf)
    return make_check("wronskian_growth", consts.p, xs[1:], violations, tolerance=1e-3)


def check_wronskian_sign(consts: SharpConstants, sol: LegendreSolution, grid_n: int = 200) -> CheckResult:
    """f2' f1 - f1' f2 keeps one sign on [-0.9, 1 - 1e-4]."""
    grid = np.linspace(ZERO_MINIMALITY_LEFT, MONOTONE_RIGHT, grid_n)
    f1, f1p = legendre_f1_values(sol, grid)
    f2, f2p = legendre_f2_values(sol, grid)
    w = f2p * f1 - f1p * f2
    return make_check("wronskian_sign", consts.p, grid, -np.sign(w[0]) * w, strict=True)


def check_zero_minimality(
    consts: SharpConstants,
    sol: LegendreSolution,
    n_pairs: int = 50,
    grid_n: int = 800,
    seed: int = 0,
) -> CheckResult:
    """Every c1 f1 + c2 f2 with c2 != 0 changes sign at or right of z_p.

    The coefficients are drawn with |c1| <= 2 and 1/2 <= |c2| <= 2, so the
    combination changes sign inside (z_p, 1 - 1e-4).
    """
    grid = np.linspace(ZERO_MINIMALITY_LEFT, MONOTONE_RIGHT, grid_n)
    f1, _ = legendre_f1_values(sol, grid)
    f2, _ = legendre_f2_values(sol, grid)
    rng = np.random.default_rng(seed)
    c1 = rng.uniform(-2.0, 2.0, n_pairs)
    c2 = rng.choice([-1.0, 1.0], n_pairs) * rng.uniform(0.5, 2.0, n_pairs)

    violations = np.empty(n_pairs)
    locations = np.full(n_pairs, np.nan)
    for i in range(n_pairs):
        cell = rightmost_sign_change(grid, c1[i] * f1 + c2[i] * f2)
        if cell is None:
            violations[i] = math.inf
            continue
        locations[i] = cell[1]
        violations[i] = (consts.z_p - ZERO_MINIMALITY_SLACK) - cell[1]
    log_debug(f"zero minimality p={consts.p}: worst margin {-violations.max():.3g}")
    return make_check("zero_minimality", consts.p, locations, violations)


def check_cp_at_least_one(consts: SharpConstants) -> CheckResult:
    return make_check("c_p_at_least_one", consts.p, [consts.z_p], [1.0 - consts.c_p], tolerance=1e-12)


def check_no_finite_majorant(
    p: float, c: float, sol: Optional[LegendreSolution] = None, grid_n: int = 200
) -> CheckResult:
    """No a f1 + b f2 with a > 0, b >= 0 majorises h_c on [z_p, 1) and stays finite at 1.

    Candidates with b > 0 are unbounded at 1, since f2 grows like
    log(1/(1 - s)); the check asks f2 to increase on the approach to 1.
    Each finite candidate a f1, a in MAJORANT_SCALES, is compared with h_c
    on [z_p, 1) and records minus the largest excess of h_c over it, so
    the check passes only when every candidate drops below h_c somewhere.
    """
    sol = sol if sol is not None else LegendreSolution.from_p(p)
    s = np.linspace(sol.largest_zero, GRID_RIGHT, grid_n)
    f1, _ = legendre_f1_values(sol, s)
    excess = Obstacle(p, c).value(s)[None, :] - MAJORANT_SCALES[:, None] * f1[None, :]
    worst_s = s[np.argmax(excess, axis=1)]
    eps = np.array(LOG_SINGULARITY_EPS)
    f2, _ = legendre_f2_values(sol, 1.0 - eps)
    violations = np.concatenate([-excess.max(axis=1), np.diff(-f2)])
    grid = np.concatenate([worst_s, 1.0 - eps[1:]])
    return make_check("no_finite_majorant", p, grid, violations, strict=True)


def check_monotone_zp(p_list: List[float]) -> CheckResult:
    """z_p increases with p."""
    zs = np.array([compute_sharp_constants(p).z_p for p in p_list])
    return make_check("zp_increasing", p_list[-1], np.asarray(p_list[1:]), -np.diff(zs), strict=True)


def run_lemma_suite(
    p: float,
    grid_n: int = 200,
    convexity_n: int = 500,
    n_pairs: int = 50,
    zero_tol: float = DEFAULT_ZERO_TOL,
    sol: Optional[LegendreSolution] = None,
) -> VerificationReport:
    """All lemma checks for one p; touching-related checks are skipped at p = 2."""
    sol = sol if sol is not None else LegendreSolution.from_p(p)
    consts = compute_sharp_constants(p, zero_tol, sol)

    checks: List[CheckResult] = [
        check_zero_bracket(consts, sol, grid_n),
        check_zp_estimate(consts),
        check_cp_at_least_one(consts),
        check_ellp(consts),
        check_slope_at_zero(consts, sol),
        check_f2_negative_at_zero(consts, sol),
        check_log_singularity(consts, sol),
        check_wronskian(consts, sol),
        check_wronskian_sign(consts, sol, grid_n),
        check_zero_minimality(consts, sol, n_pairs),
    ]
    if p > 2.0:
        beta_checks: List[Callable[[], CheckResult]] = [
            lambda: check_convexity(consts, sol, convexity_n),
            lambda: check_beta_at_zero(consts, sol),
            lambda: check_beta_increasing(consts, sol, grid_n),
            lambda: check_beta_derivative_sign(consts, sol),
            lambda: check_a_decreasing(consts, sol, grid_n),
            lambda: check_a_above_one(consts),
            lambda: check_touching(consts, sol),
            lambda: check_inflection(consts),
            lambda: check_no_finite_majorant(p, BELOW_CP * consts.c_p, sol, grid_n),
        ]
        for run in beta_checks:
            try:
                checks.append(run())
            except VerificationFailure as exc:
                checks.extend(
                    CheckResult(name=name, p=p, grid_size=0, max_violation=math.inf, passed=False)
                    for name in exc.failed
                )

    report = VerificationReport(
        p=p, alpha=consts.alpha, z_p=consts.z_p, c_p=consts.c_p, a_p=consts.a_p, i_p=consts.i_p, checks=checks
    )
    log_debug(f"lemma suite p={p}: {len(report.failed_checks())} failed of {len(checks)}")
    return report
