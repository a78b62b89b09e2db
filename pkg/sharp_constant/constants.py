"""The sharp constant c_p = (1 + z_p) / (1 - z_p) and the touching data of the Bellman candidate.

z_p is the largest zero of the bounded Legendre solution f1 of degree alpha,
alpha * (alpha + 1) = p. The candidate touches the obstacle h_{c_p} at z_p with
amplitude a_p; h_{c_p} changes concavity at i_p.
"""

import math
from dataclasses import asdict, dataclass
from typing import Optional

from bellman.obstacle import Obstacle
from specfun.legendre import (
    DEFAULT_ZERO_TOL,
    LegendreSolution,
    legendre_f1_derivatives,
    locate_largest_zero,
)
from utils.errors import DomainError, VerificationFailure
from utils.log import log_debug

# x may sit this far left of z_p and still count as [z_p, 1)
_ZP_SLACK = 1e-12


@dataclass(frozen=True)
class SharpConstants:
    """Sharp constant and touching data for one exponent p.

    a_p and i_p are None at p = 2, where the touching construction degenerates.
    """

    p: float
    alpha: float
    z_p: float
    c_p: float
    a_p: Optional[float]
    i_p: Optional[float]
    zero_tol: float

    @property
    def obstacle(self) -> Obstacle:
        return Obstacle(self.p, self.c_p)

    def as_dict(self) -> dict:
        return asdict(self)


def _solution(p: float, sol: Optional[LegendreSolution]) -> LegendreSolution:
    if sol is None:
        return LegendreSolution.from_p(p)
    if sol.p != p:
        raise DomainError(f"Legendre solution is for p={sol.p}, expected p={p}")
    return sol


def find_zp(p: float, zero_tol: float = DEFAULT_ZERO_TOL, sol: Optional[LegendreSolution] = None) -> float:
    """Largest zero of f1 on (-1, 1).

    A leftward scan from s = 1 with step 0.5/p brackets the zero, Brent's method
    refines the bracket to width ``zero_tol``.

    Args:
        p: Exponent, p >= 2
        zero_tol: Bracket width of the returned zero
        sol: Optional precomputed Legendre solution for p

    Returns:
        z_p

    Raises:
        DomainError: If p < 2
        BracketError: If no sign change is found before -1 + radius_guard

    Examples:
        >>> round(find_zp(6.0), 7)
        0.5773503
    """
    sol = _solution(p, sol)
    z = locate_largest_zero(sol, zero_tol)
    log_debug(f"find_zp: p={p} z_p={z:.15g}")
    return z


def sharp_cp(p: float, zero_tol: float = DEFAULT_ZERO_TOL) -> float:
    """Sharp constant c_p = (1 + z_p) / (1 - z_p).

    Examples:
        >>> round(sharp_cp(6.0), 7)
        3.7320508
    """
    z = find_zp(p, zero_tol)
    return (1.0 + z) / (1.0 - z)


def _check_right_of_zero(sol: LegendreSolution, x: float) -> None:
    z = sol.largest_zero
    if not z - _ZP_SLACK <= x < 1.0:
        raise DomainError(f"x={x} outside [z_p, 1) = [{z}, 1)")


def _beta_parts(sol: LegendreSolution, x: float):
    f, fp, _ = legendre_f1_derivatives(sol, x)
    p = sol.p
    numerator = (1.0 + x) * fp - p * f
    denominator = (1.0 - x) * fp + p * f
    if not denominator > 0.0:
        message = f"beta denominator {denominator} is not positive at x={x}, p={p}"
        raise VerificationFailure(message, ["beta_denominator"])
    return numerator, denominator


def beta_fn(p: float, x: float, sol: Optional[LegendreSolution] = None) -> float:
    """beta(x) = ((1+x)^p f1' - p (1+x)^(p-1) f1) / ((1-x)^p f1' + p (1-x)^(p-1) f1) on [z_p, 1).

    beta(z_p) = c_p^p and beta increases to +infinity at 1.

    Raises:
        DomainError: If x is outside [z_p, 1)
        VerificationFailure: If the denominator is not positive
    """
    sol = _solution(p, sol)
    _check_right_of_zero(sol, x)
    numerator, denominator = _beta_parts(sol, x)
    return ((1.0 + x) / (1.0 - x)) ** (p - 1.0) * numerator / denominator


def log_beta(p: float, x: float, sol: Optional[LegendreSolution] = None) -> float:
    """log beta(x), finite where beta itself would overflow."""
    sol = _solution(p, sol)
    _check_right_of_zero(sol, x)
    numerator, denominator = _beta_parts(sol, x)
    if not numerator > 0.0:
        message = f"beta numerator {numerator} is not positive at x={x}, p={p}"
        raise VerificationFailure(message, ["beta_numerator"])
    return (p - 1.0) * math.log((1.0 + x) / (1.0 - x)) + math.log(numerator / denominator)


def a_fn(p: float, x: float, sol: Optional[LegendreSolution] = None) -> float:
    """Touching amplitude a(x) on [z_p, 1).

    Equivalent to (p/2) (((1+x)/2)^(p-1) + beta(x) ((1-x)/2)^(p-1)) / f1'(x),
    written as p ((1+x)/2)^(p-1) / ((1-x) f1'(x) + p f1(x)) to avoid overflow.
    a decreases from a_p at z_p to 1 at x = 1.
    """
    sol = _solution(p, sol)
    _check_right_of_zero(sol, x)
    _, denominator = _beta_parts(sol, x)
    return p * ((1.0 + x) / 2.0) ** (p - 1.0) / denominator


def compute_ap(p: float, zero_tol: float = DEFAULT_ZERO_TOL, sol: Optional[LegendreSolution] = None) -> float:
    """a_p = a(z_p), the amplitude with which a_p * f1 touches h_{c_p} at z_p.

    Raises:
        DomainError: If p <= 2
    """
    if not p > 2.0:
        raise DomainError(f"a_p is defined for p > 2, got p={p}")
    sol = _solution(p, sol)
    return _amplitude_at_zero(sol, find_zp(p, zero_tol, sol))


def _amplitude_at_zero(sol: LegendreSolution, z: float) -> float:
    # a(z_p) with f1(z_p) = 0
    p = sol.p
    return p * ((1.0 + z) / 2.0) ** (p - 1.0) / ((1.0 - z) * legendre_f1_derivatives(sol, z)[1])


def compute_sharp_constants(
    p: float,
    zero_tol: float = DEFAULT_ZERO_TOL,
    sol: Optional[LegendreSolution] = None,
) -> SharpConstants:
    """All constants for exponent p.

    Examples:
        >>> consts = compute_sharp_constants(12.0)
        >>> round(consts.c_p, 7)
        7.8729833
    """
    sol = _solution(p, sol)
    z = find_zp(p, zero_tol, sol)
    c = (1.0 + z) / (1.0 - z)
    a_p: Optional[float] = None
    i_p: Optional[float] = None
    if p > 2.0:
        a_p = _amplitude_at_zero(sol, z)
        i_p = Obstacle(p, c).inflection_point()
    return SharpConstants(p=p, alpha=sol.alpha, z_p=z, c_p=c, a_p=a_p, i_p=i_p, zero_tol=zero_tol)


def touching_residuals(consts: SharpConstants, sol: Optional[LegendreSolution] = None) -> tuple[float, float]:
    """|a_p f1(z_p) - h(z_p)| and |a_p f1'(z_p) - h'(z_p)| for h = h_{c_p}.

    Raises:
        DomainError: At p = 2
    """
    if consts.a_p is None:
        raise DomainError("touching residuals are undefined at p = 2")
    sol = _solution(consts.p, sol)
    f, fp, _ = legendre_f1_derivatives(sol, consts.z_p)
    h = consts.obstacle
    return abs(consts.a_p * f - h.value(consts.z_p)), abs(consts.a_p * fp - h.first(consts.z_p))
