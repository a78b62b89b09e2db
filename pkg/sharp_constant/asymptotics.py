"""Large-p behaviour of z_p and c_p and the comparison constants.

As p grows, p (1 - z_p) increases to j0^2 / 2 and c_p / p tends to 4 / j0^2,
j0 the first positive zero of J0.
"""

import math
from typing import List, Sequence

import pandas as pd
from pydantic import BaseModel

from sharp_constant.constants import compute_sharp_constants
from specfun.bessel import bessel_j0, find_j0
from specfun.legendre import DEFAULT_ZERO_TOL, LegendreSolution, legendre_f1
from utils.errors import DomainError


class AsymptoticsRow(BaseModel):
    p: float
    z_p: float
    c_p: float
    p_one_minus_z: float
    c_over_p: float
    orthogonal_bound: float
    orthogonal_subordinate_bound: float
    general_bound: float


class AsymptoticsTable(BaseModel):
    j0: float
    j0_sq_half: float
    four_over_j0_sq: float
    rows: List[AsymptoticsRow]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.model_dump() for row in self.rows])

    def header_lines(self) -> List[str]:
        return [
            f"j0 = {self.j0:.15g}",
            f"j0^2/2 = {self.j0_sq_half:.15g}",
            f"4/j0^2 = {self.four_over_j0_sq:.15g}",
        ]


def comparison_constants(p: float) -> tuple[float, float, float]:
    """Known non-sharp constants for comparison with c_p.

    Returns:
        (sqrt(2 (p^2 - p)), sqrt((p^2 - p) / 2), p - 1): the bound for
        orthogonal martingales without the subordination refinement, the
        bound for the Ahlfors-Beurling martingale model, and Burkholder's
        constant for general differentially subordinated martingales
    """
    q = p * p - p
    return math.sqrt(2.0 * q), math.sqrt(q / 2.0), p - 1.0


def asymptotics_report(p_list: Sequence[float], zero_tol: float = DEFAULT_ZERO_TOL) -> AsymptoticsTable:
    """Tabulate z_p, c_p, p (1 - z_p), c_p / p and the comparison constants.

    Raises:
        DomainError: If p_list is empty, not strictly ascending, or has p < 2
    """
    p_list = list(p_list)
    if not p_list:
        raise DomainError("p_list must not be empty")
    if any(b <= a for a, b in zip(p_list, p_list[1:])):
        raise DomainError(f"p_list must be strictly ascending, got {p_list}")

    j0 = find_j0()
    rows = []
    for p in p_list:
        consts = compute_sharp_constants(p, zero_tol)
        orthogonal, subordinate, general = comparison_constants(p)
        rows.append(
            AsymptoticsRow(
                p=p,
                z_p=consts.z_p,
                c_p=consts.c_p,
                p_one_minus_z=p * (1.0 - consts.z_p),
                c_over_p=consts.c_p / p,
                orthogonal_bound=orthogonal,
                orthogonal_subordinate_bound=subordinate,
                general_bound=general,
            )
        )
    return AsymptoticsTable(j0=j0, j0_sq_half=j0 * j0 / 2.0, four_over_j0_sq=4.0 / (j0 * j0), rows=rows)


def mehler_heine_gap(n: int, x: float) -> float:
    """|L_n(cos(x/n)) - J0(x)|, which tends to zero as n grows."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    sol = LegendreSolution.from_alpha(float(n))
    return abs(legendre_f1(sol, math.cos(x / n)) - bessel_j0(x))
