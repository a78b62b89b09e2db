"""Bessel function J0 and its first positive zero j0."""

import math
from typing import Tuple

from scipy import special

from specfun.roots import bisect_root
from utils.errors import DomainError

MAX_ARGUMENT = 40.0
# the power series is summed exactly up to here, scipy's Cephes kernel beyond
SERIES_LIMIT = 12.0
# series error near j0 is a few ulps
J0_ZERO_TOL = 1e-15


def _series_terms(x: float):
    # (-1)^n (x/2)^(2n) / (n!)^2
    q = -(x * x) / 4.0
    n = 0
    term = 1.0
    while True:
        yield n, term
        n += 1
        term *= q / (n * n)
        if n > 200:
            return


def _check(x: float) -> None:
    if not 0.0 <= x <= MAX_ARGUMENT:
        raise DomainError(f"x must lie in [0, {MAX_ARGUMENT}], got {x}")


def bessel_j0(x: float) -> float:
    """J0(x) for 0 <= x <= 40.

    Examples:
        >>> bessel_j0(0.0)
        1.0
    """
    _check(x)
    if x > SERIES_LIMIT:
        return float(special.j0(x))
    return math.fsum(term for _, term in _series_terms(x))


def bessel_j0_derivatives(x: float) -> Tuple[float, float, float]:
    """Return (J0, J0', J0'') at x."""
    _check(x)
    if x > SERIES_LIMIT:
        j0, j1 = float(special.j0(x)), float(special.j1(x))
        # J0'' = -J1' = -(J0 - J1/x)
        return j0, -j1, -(j0 - j1 / x)
    terms = list(_series_terms(x))
    j0 = math.fsum(t for _, t in terms)
    if x == 0.0:
        return j0, 0.0, -0.5
    j0p = math.fsum(2 * n * t / x for n, t in terms)
    j0pp = math.fsum(2 * n * (2 * n - 1) * t / (x * x) for n, t in terms)
    return j0, j0p, j0pp


def find_j0() -> float:
    """First positive zero of J0, bracketed on a 0.1 grid and bisected to 1e-15.

    Examples:
        >>> round(find_j0(), 4)
        2.4048
    """
    step = 0.1
    a = step
    while bessel_j0(a + step) > 0.0:
        a += step
    return bisect_root(bessel_j0, a, a + step, J0_ZERO_TOL)
