"""The Bellman candidate g_p.

g_p = a_p f1 on [z_p, 1] and h_{c_p} on [-1, z_p]. The two branches meet
with matching value and slope at z_p; g_p'' jumps there, so second-order
quantities are taken one-sided.
"""

from dataclasses import dataclass, field
from typing import Literal, Optional, Tuple

import numpy as np
import pandas as pd

from bellman.obstacle import Obstacle
from bellman.operators import D_op, Dtilde_cleared, K_op
from sharp_constant.constants import SharpConstants, compute_sharp_constants
from specfun.legendre import LegendreSolution, evaluate_series
from utils.errors import DomainError
from utils.log import log_debug

Side = Literal["left", "right"]


@dataclass(frozen=True)
class CandidateJets:
    """(g, g', g'') of the candidate on a grid, with the branch of each point."""

    s: np.ndarray
    g: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    legendre_branch: np.ndarray

    @property
    def scale(self) -> np.ndarray:
        return 1.0 + np.abs(self.g) + np.abs(self.g1) + np.abs(self.g2)


@dataclass(frozen=True)
class BellmanCandidate:
    """g_p built from the sharp constants of p.

    ``override_c`` keeps z_p and a_p but replaces the obstacle constant on the
    left branch; with c < c_p the result no longer majorises h_c.
    """

    consts: SharpConstants
    sol: LegendreSolution
    override_c: Optional[float] = None
    obstacle: Obstacle = field(init=False)

    def __post_init__(self) -> None:
        if self.consts.a_p is None:
            raise DomainError(f"the Bellman candidate needs p > 2, got p={self.consts.p}")
        if self.sol.p != self.consts.p:
            raise DomainError(f"Legendre solution is for p={self.sol.p}, constants for p={self.consts.p}")
        object.__setattr__(self, "obstacle", Obstacle(self.consts.p, self.c))

    @classmethod
    def for_p(cls, p: float, override_c: Optional[float] = None, **settings) -> "BellmanCandidate":
        sol = LegendreSolution.from_p(p, **settings)
        return cls(consts=compute_sharp_constants(p, sol=sol), sol=sol, override_c=override_c)

    @property
    def p(self) -> float:
        return self.consts.p

    @property
    def c(self) -> float:
        return self.override_c if self.override_c is not None else self.consts.c_p

    @property
    def amplitude(self) -> float:
        assert self.consts.a_p is not None
        return self.consts.a_p

    def _on_legendre_branch(self, s: float, side: Optional[Side]) -> bool:
        z = self.consts.z_p
        if s == z:
            return side != "left"
        return s > z

    def jet(self, s: float, side: Optional[Side] = None) -> Tuple[float, float, float]:
        """(g, g', g'') at s in [-1, 1]; ``side`` selects the branch at s = z_p.

        On the Legendre branch all three come from the series, so D g is a
        genuine residual rather than zero by construction.
        """
        if not -1.0 <= s <= 1.0:
            raise DomainError(f"s={s} outside [-1, 1]")
        if self._on_legendre_branch(s, side):
            rep = evaluate_series(self.sol, s)
            a = self.amplitude
            return a * rep.value, a * rep.first, a * rep.second
        value, first, second = self.obstacle.jet(s)
        return float(value), float(first), float(second)

    def value(self, s: float) -> float:
        return self.jet(s)[0]

    def jet_values(self, s_values: np.ndarray) -> CandidateJets:
        """Jets on a grid; points equal to z_p use the Legendre branch."""
        s_values = np.asarray(s_values, dtype=float)
        if s_values.size and not (s_values.min() >= -1.0 and s_values.max() <= 1.0):
            raise DomainError("points must lie in [-1, 1]")
        right = s_values >= self.consts.z_p
        g, g1, g2 = (np.asarray(v, dtype=float).copy() for v in self.obstacle.jet(s_values))
        for i in np.nonzero(right)[0]:
            g[i], g1[i], g2[i] = self.jet(float(s_values[i]), "right")
        log_debug(f"candidate jets p={self.p}: {int(right.sum())} of {s_values.size} points on the Legendre branch")
        return CandidateJets(s=s_values, g=g, g1=g1, g2=g2, legendre_branch=right)

    def reconstruct_phi(self, x: float, y: float) -> float:
        """phi(x, y) = (x + y)^p g_p((y - x) / (x + y)) for x, y >= 0.

        Raises:
            DomainError: At (0, 0) or for negative arguments
        """
        if x < 0.0 or y < 0.0:
            raise DomainError(f"phi needs x, y >= 0, got ({x}, {y})")
        total = x + y
        if total == 0.0:
            raise DomainError("phi is undefined at (0, 0)")
        s = min(max((y - x) / total, -1.0), 1.0)
        return total**self.p * self.value(s)

    def candidate_table(self, s_values: np.ndarray) -> pd.DataFrame:
        """(s, g, g', g'', Dg, D~g) on points of (-1, 1)."""
        jets = self.jet_values(s_values)
        s = jets.s
        if np.any(np.abs(s) >= 1.0):
            raise DomainError("candidate table points must lie in (-1, 1)")
        dg = D_op(self.p, s, jets.g, jets.g1, jets.g2)
        dtilde = Dtilde_cleared(self.p, s, jets.g, jets.g1, jets.g2) / (1.0 - s * s)
        return pd.DataFrame(
            {
                "s": s,
                "g": jets.g,
                "g_prime": jets.g1,
                "g_second": jets.g2,
                "Dg": dg,
                "Dtilde_g": dtilde,
            }
        )

    def k_sign_table(self, n: int = 4001) -> Tuple[np.ndarray, np.ndarray]:
        """Sign of phi_xy = K g_p on an even grid of [-1 + 1e-6, 1 - 1e-6]."""
        s = np.linspace(-1.0 + 1e-6, 1.0 - 1e-6, n)
        jets = self.jet_values(s)
        return s, np.sign(K_op(self.p, s, jets.g, jets.g1, jets.g2))
