"""Touching triples (x, a, c): a * f1 and h_c share value and slope at x.

For every x in [z_p, 1) there is exactly one such triple, with c^p = beta(x)
and a = a(x). Since beta increases from c_p^p, constants c < c_p admit no
triple at all; larger constants touch strictly right of z_p with a smaller
amplitude.
"""

import math
from dataclasses import dataclass
from typing import Optional

from scipy import optimize

from sharp_constant.constants import a_fn, log_beta
from specfun.legendre import LegendreSolution
from utils.errors import DomainError
from utils.log import log_debug

# right end of the search interval for retouch
_RIGHT_GAP = 1e-9


@dataclass(frozen=True)
class TouchingTriple:
    x: float
    a: float
    c: float


def touching_triple(p: float, x: float, sol: Optional[LegendreSolution] = None) -> TouchingTriple:
    """The triple touching at x in [z_p, 1)."""
    sol = sol if sol is not None else LegendreSolution.from_p(p)
    c = math.exp(log_beta(p, x, sol) / p)
    return TouchingTriple(x=x, a=a_fn(p, x, sol), c=c)


def retouch(p: float, c: float, sol: Optional[LegendreSolution] = None) -> Optional[TouchingTriple]:
    """Solve beta(x) = c^p on [z_p, 1).

    Args:
        p: Exponent, p > 2
        c: Obstacle constant

    Returns:
        The touching triple for c, or None when c is below c_p

    Raises:
        DomainError: If p <= 2, or c is so large that the touching point lies
            within 1e-9 of s = 1
    """
    if not p > 2.0:
        raise DomainError(f"touching triples need p > 2, got p={p}")
    sol = sol if sol is not None else LegendreSolution.from_p(p)
    z = sol.largest_zero
    target = p * math.log(c)

    def gap(x: float) -> float:
        return log_beta(p, x, sol) - target

    at_zero = gap(z)
    if at_zero > 0.0:
        log_debug(f"retouch: c={c} is below c_p at p={p}, no touching triple")
        return None
    if at_zero == 0.0:
        return touching_triple(p, z, sol)
    right = 1.0 - _RIGHT_GAP
    if gap(right) < 0.0:
        raise DomainError(f"c={c} touches closer than {_RIGHT_GAP} to s=1 at p={p}")
    x = float(optimize.brentq(gap, z, right, xtol=1e-14))
    return touching_triple(p, x, sol)
