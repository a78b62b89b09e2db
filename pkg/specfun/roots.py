"""Root bracketing on one-dimensional functions.

The accepted answer always comes from an interval on which the function
changes sign; refinement is delegated to scipy's bracketing solvers.
"""

from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize

from utils.errors import BracketError
from utils.log import log_debug

_RTOL = 4.0 * float(np.finfo(float).eps)


def scan_left(
    f: Callable[[float], float],
    start: float,
    step: float,
    stop: float,
    max_halvings: int = 4,
) -> Tuple[float, float]:
    """Walk left from ``start`` until ``f`` changes sign.

    The walk uses points start - k*step down to ``stop``. When no sign change is
    found the step is halved and the walk repeated, up to ``max_halvings`` times.

    Args:
        f: Function to scan
        start: Right end of the scan, f(start) != 0
        step: Initial step (> 0)
        stop: Left limit of the scan (inclusive)
        max_halvings: Number of rescans with halved steps

    Returns:
        Tuple (a, b) with a < b, b - a <= step and f(a) * f(b) <= 0

    Raises:
        BracketError: If no sign change is found down to ``stop``
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    f_start = f(start)
    for attempt in range(max_halvings + 1):
        right, f_right = start, f_start
        k = 1
        while True:
            left = max(start - k * step, stop)
            f_left = f(left)
            if f_left == 0.0 or np.sign(f_left) != np.sign(f_right):
                log_debug(f"scan_left: sign change in [{left:.15g}, {right:.15g}] after {k} steps (attempt {attempt})")
                return left, right
            if left <= stop:
                break
            right, f_right = left, f_left
            k += 1
        step *= 0.5
    raise BracketError(f"no sign change found on [{stop}, {start}] after {max_halvings} step halvings")


def refine_root(f: Callable[[float], float], a: float, b: float, xtol: float) -> float:
    """Refine a sign-changing bracket with Brent's method.

    Raises:
        BracketError: If f(a) and f(b) have the same strict sign
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if np.sign(fa) == np.sign(fb):
        raise BracketError(f"f does not change sign on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    return float(optimize.brentq(f, a, b, xtol=xtol, rtol=_RTOL))


def bisect_root(f: Callable[[float], float], a: float, b: float, xtol: float) -> float:
    """Plain bisection of a sign-changing bracket."""
    fa, fb = f(a), f(b)
    if np.sign(fa) == np.sign(fb) and fa != 0.0 and fb != 0.0:
        raise BracketError(f"f does not change sign on [{a}, {b}]: f(a)={fa}, f(b)={fb}")
    return float(optimize.bisect(f, a, b, xtol=xtol, rtol=_RTOL))


def rightmost_sign_change(s: np.ndarray, values: np.ndarray) -> Optional[Tuple[float, float]]:
    """Rightmost grid cell on which ``values`` change sign.

    Args:
        s: Ascending grid
        values: Function values on the grid

    Returns:
        The cell (s[i], s[i+1]) with the largest i on which the values change
        sign or hit zero, or None when they keep one sign
    """
    signs = np.sign(values)
    changes = np.nonzero(signs[:-1] * signs[1:] <= 0)[0]
    if changes.size == 0:
        return None
    i = int(changes[-1])
    return float(s[i]), float(s[i + 1])
