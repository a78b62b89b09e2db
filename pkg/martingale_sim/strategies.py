"""Strategy library: non-anticipatory rules producing increment frames.

A strategy sees the step index and the current state of a batch of paths
and returns one IncrementFrame for the whole batch. Random quantities are
only drawn once, when the initial state of a batch is built.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from bellman.candidate import BellmanCandidate
from martingale_sim.frames import ArrayLike, IncrementFrame
from martingale_sim.strategy_ids import StrategyID
from utils.errors import ConstraintViolation, DomainError
from utils.log import log_debug

DEFAULT_Z0 = (1.0, 0.0)
DEFAULT_W0 = (0.0, 0.0)
GREEDY_TABLE_POINTS = 801


@dataclass
class PathState:
    """Current values of Z = (X, Y) and W = (U, V) for a batch of paths."""

    X: np.ndarray
    Y: np.ndarray
    U: np.ndarray
    V: np.ndarray
    aux: Dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def start(cls, m: int, z0: Tuple[float, float], w0: Tuple[float, float]) -> "PathState":
        return cls(X=np.full(m, z0[0]), Y=np.full(m, z0[1]), U=np.full(m, w0[0]), V=np.full(m, w0[1]))

    @property
    def size(self) -> int:
        return self.X.shape[0]

    def z_abs(self) -> np.ndarray:
        return np.hypot(self.X, self.Y)

    def w_abs(self) -> np.ndarray:
        return np.hypot(self.U, self.V)

    def advance(self, frame: IncrementFrame, db: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Apply one step; returns (dU, dV)."""
        dx, dy, du, dv = frame.apply(db)
        self.X += dx
        self.Y += dy
        self.U += du
        self.V += dv
        return du, dv

    def all_finite(self) -> np.ndarray:
        return np.isfinite(self.X) & np.isfinite(self.Y) & np.isfinite(self.U) & np.isfinite(self.V)


# a constant or a per-path function of the state
Rule = Union[float, Callable[[PathState], ArrayLike]]
# rows (h, h') of the Z part, each of shape (m, 2)
ZRule = Callable[[PathState], Tuple[np.ndarray, np.ndarray]]


class MartingaleStrategy(ABC):
    """Base class of all strategies."""

    strategy_id: StrategyID
    r: float = 1.0
    z0: Tuple[float, float] = DEFAULT_Z0
    w0: Tuple[float, float] = DEFAULT_W0

    @property
    def name(self) -> str:
        return self.strategy_id.value

    @property
    def z_orthogonal(self) -> bool:
        return self.strategy_id.z_orthogonal

    @property
    def subordination(self) -> float:
        """Allowed ratio of d<W,W> to d<Z,Z>."""
        return 1.0

    def initial_state(self, m: int, rng: np.random.Generator) -> PathState:
        return PathState.start(m, self.z0, self.w0)

    @abstractmethod
    def frame(self, step: int, state: PathState) -> IncrementFrame:
        """Frame for the increment following ``step`` (0-based)."""


def _evaluate(rule: Rule, state: PathState) -> np.ndarray:
    value = rule(state) if callable(rule) else rule
    return np.broadcast_to(np.asarray(value, dtype=float), (state.size,))


class RotationStrategy(MartingaleStrategy):
    """h at angle theta, k at angle psi with |k| = b |h|.

    Each of theta, psi and b is either a constant or a rule mapping the
    current PathState to one value per path.
    """

    def __init__(
        self,
        strategy_id: StrategyID,
        theta: Rule = 0.0,
        psi: Rule = 0.0,
        b: Rule = 1.0,
        reflect: bool = False,
        w0: Optional[Tuple[float, float]] = None,
    ):
        if not callable(b) and not 0.0 <= b <= 1.0:
            raise DomainError(f"b must lie in [0, 1], got {b}")
        self.strategy_id = strategy_id
        self.theta = theta
        self.psi = psi
        self.b = b
        self.reflect = reflect
        if w0 is not None:
            self.w0 = w0

    def frame(self, step: int, state: PathState) -> IncrementFrame:
        b = _evaluate(self.b, state)
        outside = ~((b >= 0.0) & (b <= 1.0))
        if outside.any():
            path = int(np.argmax(outside))
            raise ConstraintViolation(
                f"strategy {self.name}: b = {b[path]} outside [0, 1] on path {path} at step {step}",
                path,
                {"b": float(b[path])},
            )
        theta, psi = _evaluate(self.theta, state), _evaluate(self.psi, state)
        return IncrementFrame.rotation(theta, psi, b, state.size, self.r, self.reflect)


def rotation_strategy(
    theta_rule: Rule = 0.0,
    psi_rule: Rule = 0.0,
    b_rule: Rule = 1.0,
    reflect: bool = False,
    w0: Optional[Tuple[float, float]] = None,
    strategy_id: StrategyID = StrategyID.ROTATION,
) -> RotationStrategy:
    """Rotation strategy driven by arbitrary non-anticipatory rules."""
    return RotationStrategy(strategy_id, theta=theta_rule, psi=psi_rule, b=b_rule, reflect=reflect, w0=w0)


def aligned_start(theta: float, psi: float, z0: Tuple[float, float] = DEFAULT_Z0) -> Tuple[float, float]:
    """W(0) with |W| = |Z| pathwise under constant angles theta, psi and b = 1.

    dW is dZ rotated by theta - psi, so W(0) is Z(0) rotated by the same angle.
    """
    delta = theta - psi
    c, s = math.cos(delta), math.sin(delta)
    return c * z0[0] - s * z0[1], s * z0[0] + c * z0[1]


class SwitchingStrategy(RotationStrategy):
    """k follows h while X U >= 0 and turns by a right angle otherwise."""

    def __init__(self):
        super().__init__(StrategyID.SWITCHING, psi=self.switch_angle)

    @staticmethod
    def switch_angle(state: PathState) -> np.ndarray:
        return np.where(state.X * state.U >= 0.0, 0.0, 0.5 * math.pi)


def _steer(state: PathState, sigma: np.ndarray) -> np.ndarray:
    # psi for dW = sigma * (dZ rotated from the direction of Z to that of W), with h at angle 0
    delta = np.arctan2(state.V, state.U) - np.arctan2(state.Y, state.X)
    return -delta + np.where(sigma < 0.0, math.pi, 0.0)


class GreedyStrategy(RotationStrategy):
    """Steers the radial part of dW by the sign of phi_xy of the Bellman candidate.

    Where phi_xy >= 0 at s = (|W| - |Z|) / (|W| + |Z|), |W| moves together
    with |Z|; elsewhere against it.
    """

    def __init__(self, candidate: BellmanCandidate, table_points: int = GREEDY_TABLE_POINTS):
        super().__init__(StrategyID.GREEDY, psi=self.steer_angle)
        self.s_table, self.sign_table = candidate.k_sign_table(table_points)
        log_debug(f"greedy strategy p={candidate.p}: phi_xy sign table with {table_points} points")

    def sigma(self, state: PathState) -> np.ndarray:
        z, w = state.z_abs(), state.w_abs()
        total = z + w
        s = np.divide(w - z, total, out=np.zeros_like(total), where=total > 0.0)
        return np.where(np.interp(s, self.s_table, self.sign_table) >= 0.0, 1.0, -1.0)

    def steer_angle(self, state: PathState) -> np.ndarray:
        return _steer(state, self.sigma(state))


class ABTransformStrategy(MartingaleStrategy):
    """W = A * Z scaled by ``scale``.

    Without a ``z_rule``, Z is driven along its own direction plus a random
    per-path offset drawn at the start.
    """

    strategy_id = StrategyID.AB_TRANSFORM

    def __init__(self, scale: float = 0.5, z_rule: Optional[ZRule] = None):
        self.scale = scale
        self.z_rule = z_rule

    @property
    def subordination(self) -> float:
        return 4.0 * self.scale**2

    def initial_state(self, m: int, rng: np.random.Generator) -> PathState:
        state = super().initial_state(m, rng)
        if self.z_rule is None:
            state.aux["theta0"] = rng.uniform(0.0, 2.0 * math.pi, m)
        return state

    def z_rows(self, state: PathState) -> Tuple[np.ndarray, np.ndarray]:
        if self.z_rule is not None:
            h, h_perp = self.z_rule(state)
            shape = (state.size, 2)
            return np.broadcast_to(h, shape), np.broadcast_to(h_perp, shape)
        theta = np.arctan2(state.Y, state.X) + state.aux["theta0"]
        rows = IncrementFrame.rotation(theta, 0.0, 0.0, state.size, self.r)
        return rows.h, rows.h_perp

    def frame(self, step: int, state: PathState) -> IncrementFrame:
        h, h_perp = self.z_rows(state)
        return IncrementFrame.ab_transform(h, h_perp, self.scale)


def ab_transform_strategy(z_rule: Optional[ZRule] = None, scale: float = 0.5) -> ABTransformStrategy:
    """W = A * Z strategy whose Z rows come from ``z_rule``."""
    return ABTransformStrategy(scale=scale, z_rule=z_rule)


def get_strategy(strategy_id: StrategyID, p: Optional[float] = None) -> MartingaleStrategy:
    """Factory for the shipped strategies.

    Args:
        strategy_id: Strategy to build
        p: Exponent, needed by the greedy strategy (p > 2)

    Raises:
        DomainError: If the greedy strategy is requested without p > 2
    """
    sid = StrategyID(strategy_id)
    if sid is StrategyID.IDENTITY:
        return RotationStrategy(sid, w0=DEFAULT_Z0)
    if sid is StrategyID.ROTATION:
        psi = 0.25 * math.pi
        return RotationStrategy(sid, psi=psi, w0=aligned_start(0.0, psi))
    if sid is StrategyID.REFLECTED:
        return RotationStrategy(sid, psi=0.25 * math.pi, reflect=True)
    if sid is StrategyID.DAMPED:
        return RotationStrategy(sid, b=0.5)
    if sid is StrategyID.ANTIPHASE:
        return RotationStrategy(sid, psi=math.pi)
    if sid is StrategyID.SWITCHING:
        return SwitchingStrategy()
    if sid is StrategyID.AB_TRANSFORM:
        return ABTransformStrategy()
    if p is None or not p > 2.0:
        raise DomainError(f"the greedy strategy needs p > 2, got p={p}")
    return GreedyStrategy(BellmanCandidate.for_p(p))
