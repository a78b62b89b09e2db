"""Legendre functions of real degree.

For p = alpha * (alpha + 1) the Legendre equation

    (1 - s^2) y'' - 2 s y' + p y = 0

has, on (-1, 1], one solution f1 bounded at s = 1 (normalised by f1(1) = 1)
and a companion f2 with a logarithmic singularity at s = 1. For integer alpha,
f1 is the Legendre polynomial of that degree.

f1 is evaluated from its hypergeometric series in t = (1 - s) / 2,

    f1(s) = sum_n b_n t^n,    b_0 = 1,    b_n = b_{n-1} * (n (n - 1) - p) / n^2,

carried out in double-double arithmetic so that the alternating terms of the
series do not destroy the last digits. Away from s = 1 the series is replaced
by a DOP853 continuation of the ODE.
"""

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy import integrate

from specfun.compensated import (
    DD,
    DD_ONE,
    DD_ZERO,
    dd_abs,
    dd_add,
    dd_div_float,
    dd_mul,
    dd_mul_float,
    dd_to_float,
    two_sum,
)
from specfun.roots import refine_root, scan_left
from utils.errors import DomainError, IntegrationError, SeriesConvergenceError
from utils.log import log_debug

DEFAULT_TRUNC_TOL = 1e-14
DEFAULT_MAX_TERMS = 10_000
DEFAULT_RADIUS_GUARD = 1e-6
DEFAULT_SERIES_EDGE = -0.5
DEFAULT_ZERO_TOL = 1e-13
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14
ODE_DELTA = 1e-4

# consecutive negligible terms that end the series
_QUIET_TERMS = 3
# relative precision of double-double arithmetic, used for the cancellation estimate
_DD_EPS = 2.0**-104

# f2 switches from the quadrature form to ODE integration at z + _F2_SWITCH * (1 - z)
_F2_SWITCH = 0.25
_R_ENDPOINT_EPS = 1e-9


def alpha_from_p(p: float) -> float:
    """Degree alpha >= 1 with alpha * (alpha + 1) = p.

    Args:
        p: Exponent, p >= 2

    Returns:
        alpha = (sqrt(1 + 4p) - 1) / 2

    Raises:
        DomainError: If p < 2

    Examples:
        >>> alpha_from_p(6.0)
        2.0
    """
    if not p >= 2.0:
        raise DomainError(f"p must be >= 2, got {p}")
    return (math.sqrt(1.0 + 4.0 * p) - 1.0) / 2.0


def _next_coefficient(b_prev: DD, n: int, p: float) -> DD:
    # n (n - 1) is exact in a double for every n below the term cap
    numerator = two_sum(float(n * (n - 1)), -p)
    return dd_div_float(dd_mul(b_prev, numerator), float(n * n))


@dataclass(frozen=True)
class SeriesEvalReport:
    """Outcome of one series evaluation of f1 and its first two derivatives."""

    value: float
    first: float
    second: float
    terms_used: int
    est_trunc_error: float


@dataclass(frozen=True)
class LegendreSolution:
    """The bounded Legendre solution f1 of degree alpha and its evaluation settings.

    ``coeffs`` holds the coefficients a_n of f1 in powers of (s - 1), as many as
    the series needs on the trust region [series_edge, 1].
    """

    alpha: float
    p: float
    trunc_tol: float = DEFAULT_TRUNC_TOL
    radius_guard: float = DEFAULT_RADIUS_GUARD
    max_terms: int = DEFAULT_MAX_TERMS
    series_edge: float = DEFAULT_SERIES_EDGE
    ode_rtol: float = ODE_RTOL
    ode_atol: float = ODE_ATOL
    ode_delta: float = ODE_DELTA
    coeffs: Tuple[float, ...] = field(init=False)
    _dd_coeffs: Tuple[DD, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.alpha >= 1.0:
            raise DomainError(f"alpha must be >= 1, got {self.alpha}")
        if abs(self.alpha * (self.alpha + 1.0) - self.p) > 1e-12 * self.p:
            raise DomainError(f"p={self.p} does not match alpha={self.alpha}: alpha*(alpha+1) must equal p")
        if not 0.0 < self.trunc_tol < 1e-3:
            raise DomainError(f"trunc_tol must lie in (0, 1e-3), got {self.trunc_tol}")
        if not 0.0 < self.radius_guard < 0.5:
            raise DomainError(f"radius_guard must lie in (0, 0.5), got {self.radius_guard}")
        if not -1.0 + self.radius_guard < self.series_edge < 1.0:
            raise DomainError(f"series_edge must lie in (-1 + radius_guard, 1), got {self.series_edge}")

        stored = self._stored_coefficients()
        object.__setattr__(self, "_dd_coeffs", stored)
        object.__setattr__(self, "coeffs", tuple(dd_to_float(b) * (-0.5) ** n for n, b in enumerate(stored)))

    @classmethod
    def from_p(cls, p: float, **settings) -> "LegendreSolution":
        """Solution for exponent p (p >= 2)."""
        return cls(alpha=alpha_from_p(p), p=p, **settings)

    @classmethod
    def from_alpha(cls, alpha: float, **settings) -> "LegendreSolution":
        """Solution for degree alpha (alpha >= 1)."""
        if not alpha >= 1.0:
            raise DomainError(f"alpha must be >= 1, got {alpha}")
        return cls(alpha=alpha, p=alpha * (alpha + 1.0), **settings)

    @property
    def terminates(self) -> bool:
        """True when alpha is an integer and f1 is a polynomial."""
        return float(self.alpha).is_integer()

    @cached_property
    def largest_zero(self) -> float:
        """Largest zero of f1 on (-1, 1), bracketed to DEFAULT_ZERO_TOL."""
        return locate_largest_zero(self, DEFAULT_ZERO_TOL)

    def _stored_coefficients(self) -> Tuple[DD, ...]:
        t_edge = (1.0 - self.series_edge) / 2.0
        coeffs: List[DD] = [DD_ONE]
        b = DD_ONE
        quiet = 0
        for n in range(1, self.max_terms + 1):
            b = _next_coefficient(b, n, self.p)
            if b[0] == 0.0:
                break
            coeffs.append(b)
            quiet = quiet + 1 if dd_abs(b) * t_edge**n <= self.trunc_tol else 0
            if quiet >= _QUIET_TERMS:
                break
        return tuple(coeffs)

    def coefficient(self, n: int, previous: DD) -> DD:
        """Double-double b_n; ``previous`` must be b_{n-1}."""
        if n < len(self._dd_coeffs):
            return self._dd_coeffs[n]
        if self.terminates and n > self.alpha:
            return DD_ZERO
        return _next_coefficient(previous, n, self.p)

    def coefficient_table(self) -> List[dict]:
        """Coefficients of f1 about s = 1 as [{"n": n, "a_n": a_n}, ...]."""
        return [{"n": n, "a_n": a_n} for n, a_n in enumerate(self.coeffs)]


def dump_coefficients_json(sol: LegendreSolution, path: Optional[Union[str, Path]] = None) -> str:
    """Serialise the series coefficients; writes them to ``path`` when given."""
    text = json.dumps(sol.coefficient_table(), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def _check_point(sol: LegendreSolution, s: float) -> None:
    if not -1.0 + sol.radius_guard <= s <= 1.0:
        raise DomainError(f"s={s} outside [{-1.0 + sol.radius_guard}, 1]")


def evaluate_series(sol: LegendreSolution, s: float) -> SeriesEvalReport:
    """Sum the f1 series at s together with its term-wise first and second derivatives.

    Valid on [-1 + radius_guard, 1]; far from s = 1 a non-terminating series
    needs many terms and may hit the term cap.

    Raises:
        DomainError: If s lies outside [-1 + radius_guard, 1]
        SeriesConvergenceError: If three consecutive negligible terms are not
            reached within max_terms, or cancellation exceeds the tolerance
    """
    _check_point(sol, s)
    # t = (1 - s) / 2 kept exactly as a double-double
    t_hi, t_lo = two_sum(1.0, -s)
    t: DD = (0.5 * t_hi, 0.5 * t_lo)

    value, d1, d2 = DD_ONE, DD_ZERO, DD_ZERO
    pow_km2, pow_km1 = DD_ZERO, DD_ONE
    b = DD_ONE
    abs_sum = 1.0
    quiet = 0
    recent: List[float] = []
    terms_used = 1
    for k in range(1, sol.max_terms + 1):
        b = sol.coefficient(k, b)
        if b[0] == 0.0:
            recent = [0.0]
            break
        pow_k = dd_mul(pow_km1, t)
        term0 = dd_mul(b, pow_k)
        term1 = dd_mul_float(dd_mul(b, pow_km1), float(k))
        term2 = dd_mul_float(dd_mul(b, pow_km2), float(k * (k - 1))) if k >= 2 else DD_ZERO
        value = dd_add(value, term0)
        d1 = dd_add(d1, term1)
        d2 = dd_add(d2, term2)
        terms_used = k + 1
        abs_sum += dd_abs(term0)

        rel0 = dd_abs(term0) / max(dd_abs(value), 1.0)
        rel1 = dd_abs(term1) / max(dd_abs(d1), 1.0)
        rel2 = dd_abs(term2) / max(dd_abs(d2), 1.0)
        recent = (recent + [rel0])[-_QUIET_TERMS:]
        quiet = quiet + 1 if k >= 3 and max(rel0, rel1, rel2) <= sol.trunc_tol else 0
        if quiet >= _QUIET_TERMS:
            break
        pow_km2, pow_km1 = pow_km1, pow_k
    else:
        raise SeriesConvergenceError(
            f"f1 series for alpha={sol.alpha} at s={s} did not converge within {sol.max_terms} terms"
        )

    f = dd_to_float(value)
    est = max(max(recent, default=0.0), _DD_EPS * abs_sum * terms_used / max(abs(f), 1.0))
    if est > sol.trunc_tol:
        raise SeriesConvergenceError(
            f"f1 series for alpha={sol.alpha} at s={s} lost precision to cancellation (estimate {est:.3g})"
        )
    # d/ds = -(1/2) d/dt
    return SeriesEvalReport(
        value=f,
        first=-0.5 * dd_to_float(d1),
        second=0.25 * dd_to_float(d2),
        terms_used=terms_used,
        est_trunc_error=est,
    )


def _legendre_rhs(p: float):
    def rhs(s: float, y: np.ndarray) -> List[float]:
        return [y[1], (2.0 * s * y[1] - p * y[0]) / ((1.0 - s) * (1.0 + s))]

    return rhs


def _integrate_legendre(
    sol: LegendreSolution,
    s0: float,
    y0: Tuple[float, float],
    s_eval: np.ndarray,
    first_step: Optional[float] = None,
) -> np.ndarray:
    """Integrate the Legendre equation from s0 and return [y, y'] at ``s_eval``.

    ``s_eval`` must be ordered in the direction of integration.
    """
    s_end = float(s_eval[-1])
    if s_end == s0:
        return np.tile(np.asarray(y0, dtype=float)[:, None], (1, len(s_eval)))
    if first_step is not None:
        first_step = min(first_step, abs(s_end - s0))
    res = integrate.solve_ivp(
        _legendre_rhs(sol.p),
        (s0, s_end),
        list(y0),
        method="DOP853",
        t_eval=s_eval,
        rtol=sol.ode_rtol,
        atol=sol.ode_atol,
        first_step=first_step,
    )
    if not res.success:
        raise IntegrationError(f"Legendre ODE (p={sol.p}) from s={s0} to s={s_end} failed: {res.message}")
    log_debug(f"Legendre ODE p={sol.p}: {s0:.6g} -> {s_end:.6g} in {res.nfev} evaluations")
    return res.y


def _continue_left(sol: LegendreSolution, s_points: np.ndarray) -> np.ndarray:
    """[f1, f1'] at points left of series_edge via ODE continuation from series_edge."""
    start = evaluate_series(sol, sol.series_edge)
    order = np.argsort(-s_points)
    ys = _integrate_legendre(sol, sol.series_edge, (start.value, start.first), s_points[order])
    out = np.empty_like(ys)
    out[:, order] = ys
    return out


def legendre_f1_derivatives(sol: LegendreSolution, s: float) -> Tuple[float, float, float]:
    """Return (f1, f1', f1'') at s in [-1 + radius_guard, 1].

    f1'' comes from the ODE identity f1'' = (2 s f1' - p f1) / (1 - s^2) and, at
    s = 1, from the closed form p (p - 2) / 8.

    Raises:
        DomainError: If s lies outside [-1 + radius_guard, 1]
        NumericalFailure: If neither the series nor the ODE continuation converge
    """
    _check_point(sol, s)
    p = sol.p
    if s == 1.0:
        return 1.0, p / 2.0, p * (p - 2.0) / 8.0
    if sol.terminates or s >= sol.series_edge:
        rep = evaluate_series(sol, s)
        f, fp = rep.value, rep.first
    else:
        f, fp = (float(v) for v in _continue_left(sol, np.array([s]))[:, 0])
    return f, fp, (2.0 * s * fp - p * f) / ((1.0 - s) * (1.0 + s))


def legendre_f1(sol: LegendreSolution, s: float) -> float:
    """Bounded Legendre solution f1 at s, normalised by f1(1) = 1.

    Examples:
        >>> legendre_f1(LegendreSolution.from_p(6.0), 0.5)
        -0.125
    """
    return legendre_f1_derivatives(sol, s)[0]


def legendre_f1_prime(sol: LegendreSolution, s: float) -> float:
    return legendre_f1_derivatives(sol, s)[1]


def legendre_f1_second(sol: LegendreSolution, s: float) -> float:
    return legendre_f1_derivatives(sol, s)[2]


def legendre_f1_values(sol: LegendreSolution, s_values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised (f1, f1') on a set of points.

    Points left of series_edge share a single ODE continuation.
    """
    s_values = np.asarray(s_values, dtype=float)
    f = np.empty_like(s_values)
    fp = np.empty_like(s_values)
    if s_values.size and not (s_values.min() >= -1.0 + sol.radius_guard and s_values.max() <= 1.0):
        raise DomainError(f"points must lie in [{-1.0 + sol.radius_guard}, 1]")
    near = np.ones_like(s_values, dtype=bool) if sol.terminates else s_values >= sol.series_edge
    for i in np.nonzero(near)[0]:
        f[i], fp[i], _ = legendre_f1_derivatives(sol, float(s_values[i]))
    far = np.nonzero(~near)[0]
    if far.size:
        ys = _continue_left(sol, s_values[far])
        f[far], fp[far] = ys[0], ys[1]
    return f, fp


def legendre_f1_ode_oracle(alpha: float, s_target: float, step: float) -> float:
    """Independent value of f1 at s_target by integrating the Legendre ODE.

    Starts at s0 = 1 - ODE_DELTA with initial data from the series and runs an
    adaptive DOP853 integrator to s_target.

    Args:
        alpha: Degree (>= 1)
        s_target: Target point in (-1, 1)
        step: Initial step size of the integrator (> 0)

    Returns:
        f1(s_target)

    Raises:
        DomainError: If s_target is outside (-1, 1) or step <= 0
        IntegrationError: If the integrator fails before reaching s_target
    """
    if not -1.0 < s_target < 1.0:
        raise DomainError(f"s_target must lie in (-1, 1), got {s_target}")
    if not step > 0.0:
        raise DomainError(f"step must be positive, got {step}")
    sol = LegendreSolution.from_alpha(alpha)
    s0 = 1.0 - sol.ode_delta
    start = evaluate_series(sol, s0)
    ys = _integrate_legendre(sol, s0, (start.value, start.first), np.array([s_target]), first_step=step)
    return float(ys[0, -1])


def locate_largest_zero(sol: LegendreSolution, zero_tol: float) -> float:
    """Largest zero of f1: leftward scan from s = 1 with step 0.5/p, then Brent refinement.

    Raises:
        BracketError: If no sign change exists above -1 + radius_guard
    """
    if not zero_tol > 0.0:
        raise DomainError(f"zero_tol must be positive, got {zero_tol}")

    def f(s: float) -> float:
        return legendre_f1(sol, s)

    a, b = scan_left(f, 1.0, 0.5 / sol.p, -1.0 + sol.radius_guard)
    return refine_root(f, a, b, zero_tol)


def _r_integrand(sol: LegendreSolution):
    # 1 / ((1 - u^2) f1(u)^2) - 1 / (2 (1 - u)), bounded at u = 1
    limit = (2.0 * sol.p + 1.0) / 4.0

    def r(u: float) -> float:
        eps = 1.0 - u
        if eps < _R_ENDPOINT_EPS:
            return limit
        f = legendre_f1(sol, u)
        return 1.0 / (eps * (1.0 + u) * f * f) - 0.5 / eps

    return r


def _quad(func, a: float, b: float) -> float:
    value, abserr = integrate.quad(func, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
    if not math.isfinite(value) or abserr > 1e-9 * max(1.0, abs(value)):
        raise IntegrationError(f"quadrature on [{a}, {b}] did not converge (error estimate {abserr:.3g})")
    return value


def legendre_f2_values(sol: LegendreSolution, s_values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised (f2, f2') of the log-singular Legendre solution.

    Normalisation:

        f2(s) = f1(s) * (log(1 / (1 - s)) - 2 * integral_s^1 R(u) du),
        R(u)  = 1 / ((1 - u^2) f1(u)^2) - 1 / (2 (1 - u)),

    so that f2 - f1 * log(1/(1 - s)) vanishes at s = 1 and the Wronskian
    f2' f1 - f1' f2 equals 2 / (1 - s^2). The quadrature form is used right of
    z + (1 - z)/4, z the largest zero of f1; further left f2 is continued by
    integrating the Legendre equation, which is regular at the zeros of f1.

    Raises:
        DomainError: If a point lies outside [-1 + radius_guard, 1 - radius_guard]
    """
    s_values = np.asarray(s_values, dtype=float)
    lo, hi = -1.0 + sol.radius_guard, 1.0 - sol.radius_guard
    if s_values.size and not (s_values.min() >= lo and s_values.max() <= hi):
        raise DomainError(f"f2 points must lie in [{lo}, {hi}]")

    z = sol.largest_zero
    s_switch = z + _F2_SWITCH * (1.0 - z)
    r = _r_integrand(sol)

    right = np.nonzero(s_values >= s_switch)[0]
    left = np.nonzero(s_values < s_switch)[0]
    quad_points = np.concatenate([s_values[right], [s_switch] if left.size else []])

    # cumulative integral of R from 1 down to each quadrature point
    order = np.argsort(-quad_points)
    integral = np.empty_like(quad_points)
    acc, upper = 0.0, 1.0
    for i in order:
        acc += _quad(r, float(quad_points[i]), upper)
        upper = float(quad_points[i])
        integral[i] = acc

    f2 = np.empty_like(s_values)
    f2p = np.empty_like(s_values)
    start = (0.0, 0.0)
    for j, s in enumerate(quad_points):
        f, fp, _ = legendre_f1_derivatives(sol, float(s))
        q = math.log(1.0 / (1.0 - s)) - 2.0 * integral[j]
        value = f * q
        deriv = fp * q + 2.0 / ((1.0 - s) * (1.0 + s) * f)
        if j < right.size:
            f2[right[j]], f2p[right[j]] = value, deriv
        else:
            start = (value, deriv)

    if left.size:
        targets = s_values[left]
        order_left = np.argsort(-targets)
        ys = _integrate_legendre(sol, s_switch, start, targets[order_left])
        f2[left[order_left]], f2p[left[order_left]] = ys[0], ys[1]
    return f2, f2p


def legendre_f2(sol: LegendreSolution, s: float) -> Tuple[float, float]:
    """Return (f2(s), f2'(s)) for s in [-1 + radius_guard, 1 - radius_guard].

    See legendre_f2_values for the normalisation.
    """
    f2, f2p = legendre_f2_values(sol, np.array([s], dtype=float))
    return float(f2[0]), float(f2p[0])
