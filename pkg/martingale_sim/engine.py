"""Monte-Carlo estimation of ||W(t)||_p / ||Z(t)||_p.

Paths are simulated in batches. Batch b draws all of its randomness from the
b-th child of SeedSequence(seed), so estimates do not depend on how many
worker threads run the batches. Standard errors come from batch means.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field

from infra.config_models import config
from martingale_sim.brownian import BrownianMethod, brownian_increments
from martingale_sim.strategies import MartingaleStrategy
from utils.errors import DomainError, NonFinitePathError
from utils.log import log_debug, log_warning

MIN_PATHS = 1000
DEFAULT_BATCHES = 50
DEFAULT_HEAVY_TAIL_RATIO = 1e3


class PathEstimate(BaseModel):
    """Moment estimates at t_final for one strategy and one p."""

    strategy: str
    p: float
    n_paths: int = Field(ge=MIN_PATHS)
    n_steps: int
    t_final: float
    seed: int
    n_batches: int
    brownian: str
    est_Zp: float
    est_Wp: float
    se_Zp: float
    se_Wp: float
    ratio: float
    se_ratio: float
    mean_X: float
    mean_Y: float
    mean_U: float
    mean_V: float
    se_X: float
    se_Y: float
    se_U: float
    se_V: float
    realized_cov_UV: float
    se_cov_UV: float
    max_qv_ratio: float
    moment_ratio_Z: float
    moment_ratio_W: float

    def mean_within(self, name: str, target: float, n_se: float = 3.0) -> bool:
        """|mean - target| <= n_se standard errors for one of X, Y, U, V."""
        return abs(getattr(self, f"mean_{name}") - target) <= n_se * getattr(self, f"se_{name}")

    def ratio_below(self, bound: float, n_se: float = 3.0) -> bool:
        return self.ratio <= bound + n_se * self.se_ratio


@dataclass(frozen=True)
class BatchMoments:
    """Per-batch sample means."""

    size: int
    z_p: float
    w_p: float
    z_2p: float
    w_2p: float
    means: np.ndarray
    cov_uv: float
    max_qv_ratio: float


def _batch_sizes(n_paths: int, n_batches: int) -> List[int]:
    base, extra = divmod(n_paths, n_batches)
    return [base + (1 if b < extra else 0) for b in range(n_batches)]


def simulate_batch(
    strategy: MartingaleStrategy,
    p: float,
    m: int,
    n_steps: int,
    t_final: float,
    rng: np.random.Generator,
    batch: int = 0,
    brownian: BrownianMethod = "bridge",
) -> BatchMoments:
    """Simulate m paths and reduce them to sample means.

    Raises:
        ConstraintViolation: If the strategy produces an inadmissible frame
        NonFinitePathError: If a path value becomes inf or nan
    """
    state = strategy.initial_state(m, rng)
    db = brownian_increments(rng, m, n_steps, t_final, brownian)
    cov_uv = np.zeros(m)
    qv_z = np.zeros(m)
    qv_w = np.zeros(m)
    for step in range(n_steps):
        frame = strategy.frame(step, state)
        frame.check(z_orthogonal=strategy.z_orthogonal, subordination=strategy.subordination)
        du, dv = state.advance(frame, db[step])
        cov_uv += du * dv
        qv_z += frame.z_energy()
        qv_w += frame.w_energy()
        finite = state.all_finite()
        if not finite.all():
            path = int(np.argmin(finite))
            raise NonFinitePathError(
                f"strategy {strategy.name}: non-finite value in batch {batch} at step {step}, path {path}",
                batch,
                step,
                path,
            )

    z_abs, w_abs = state.z_abs(), state.w_abs()
    z_pow, w_pow = z_abs**p, w_abs**p
    qv_ratio = np.divide(qv_w, qv_z, out=np.zeros_like(qv_w), where=qv_z > 0.0)
    return BatchMoments(
        size=m,
        z_p=float(z_pow.mean()),
        w_p=float(w_pow.mean()),
        z_2p=float((z_pow * z_pow).mean()),
        w_2p=float((w_pow * w_pow).mean()),
        means=np.array([state.X.mean(), state.Y.mean(), state.U.mean(), state.V.mean()]),
        cov_uv=float(cov_uv.mean()),
        max_qv_ratio=float(qv_ratio.max()),
    )


def batch_covariance(a: np.ndarray, b: np.ndarray, weights: np.ndarray) -> float:
    """Estimated covariance of the weighted means of two batch statistics.

    With normalised weights w, it is n / (n - 1) * sum w^2 (a - a_bar) (b - b_bar);
    for equal weights this is the usual batch-means cov(a, b) / n.
    """
    w = weights / weights.sum()
    a_bar, b_bar = np.sum(w * a), np.sum(w * b)
    n = a.size
    return float(n / (n - 1) * np.sum(w * w * (a - a_bar) * (b - b_bar)))


def batch_mean_and_se(values: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    """Weighted mean of batch statistics and its standard error."""
    mean = float(np.sum(weights * values) / np.sum(weights))
    return mean, math.sqrt(max(batch_covariance(values, values, weights), 0.0))


def run_mc(
    strategy: MartingaleStrategy,
    p: float,
    n_paths: int,
    n_steps: int,
    t_final: float,
    seed: int,
    n_batches: int = DEFAULT_BATCHES,
    brownian: BrownianMethod = "bridge",
    heavy_tail_ratio: float = DEFAULT_HEAVY_TAIL_RATIO,
    max_workers: Optional[int] = None,
) -> PathEstimate:
    """Estimate E|Z(t)|^p, E|W(t)|^p and the ratio (E|W|^p / E|Z|^p)^(1/p).

    Args:
        strategy: Frame rule driving Z and W
        p: Exponent (>= 2)
        n_paths: Number of paths (>= 1000)
        n_steps: Time steps; a power of two for the bridge construction
        t_final: Terminal time
        seed: Root seed
        n_batches: Batches for batch-means standard errors
        brownian: "bridge" or "increments"
        heavy_tail_ratio: Warn when E|Z|^(2p) / (E|Z|^p)^2 exceeds this
        max_workers: Worker threads; defaults to the SHARP_MTG_THREADS cap

    Raises:
        DomainError: For parameters outside their ranges
        ConstraintViolation: If the strategy leaves the admissible set
        NonFinitePathError: If a path blows up
    """
    if not p >= 2.0:
        raise DomainError(f"p must be >= 2, got {p}")
    if n_paths < MIN_PATHS:
        raise DomainError(f"n_paths must be >= {MIN_PATHS}, got {n_paths}")
    if n_steps < 1 or not t_final > 0.0 or seed < 0:
        raise DomainError(f"need n_steps >= 1, t_final > 0 and seed >= 0, got {n_steps}, {t_final}, {seed}")
    if not 2 <= n_batches <= n_paths:
        raise DomainError(f"n_batches must lie in [2, n_paths], got {n_batches}")

    sizes = _batch_sizes(n_paths, n_batches)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    workers = max_workers or config.parallel.workers_for(n_batches)
    log_debug(f"run_mc {strategy.name} p={p}: {n_paths} paths in {n_batches} batches on {workers} worker(s)")

    def run_batch(b: int) -> BatchMoments:
        rng = np.random.default_rng(children[b])
        return simulate_batch(strategy, p, sizes[b], n_steps, t_final, rng, b, brownian)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        batches = list(pool.map(run_batch, range(n_batches)))

    weights = np.array([bm.size for bm in batches], dtype=float)
    z_p = np.array([bm.z_p for bm in batches])
    w_p = np.array([bm.w_p for bm in batches])
    est_z, se_z = batch_mean_and_se(z_p, weights)
    est_w, se_w = batch_mean_and_se(w_p, weights)
    means = np.stack([bm.means for bm in batches])
    location = [batch_mean_and_se(means[:, j], weights) for j in range(4)]
    est_cov, se_cov = batch_mean_and_se(np.array([bm.cov_uv for bm in batches]), weights)
    est_z2 = float(np.sum(weights * np.array([bm.z_2p for bm in batches])) / weights.sum())
    est_w2 = float(np.sum(weights * np.array([bm.w_2p for bm in batches])) / weights.sum())

    ratio = (est_w / est_z) ** (1.0 / p) if est_z > 0.0 else float("nan")
    # delta method on log ratio with the batch covariance of the two moment estimates
    cov_zw = batch_covariance(z_p, w_p, weights)
    if est_w > 0.0 and est_z > 0.0:
        var_log = (se_w / est_w) ** 2 + (se_z / est_z) ** 2 - 2.0 * cov_zw / (est_w * est_z)
        se_ratio = ratio * np.sqrt(max(var_log, 0.0)) / p
    else:
        se_ratio = 0.0

    moment_ratio_z = est_z2 / est_z**2 if est_z > 0.0 else float("nan")
    moment_ratio_w = est_w2 / est_w**2 if est_w > 0.0 else float("nan")
    if moment_ratio_z > heavy_tail_ratio or moment_ratio_w > heavy_tail_ratio:
        log_warning(
            f"{strategy.name} p={p}: heavy-tailed moments (E|.|^2p / (E|.|^p)^2 = "
            f"{moment_ratio_z:.3g} for Z, {moment_ratio_w:.3g} for W); standard errors may be unreliable"
        )

    return PathEstimate(
        strategy=strategy.name,
        p=p,
        n_paths=n_paths,
        n_steps=n_steps,
        t_final=t_final,
        seed=seed,
        n_batches=n_batches,
        brownian=brownian,
        est_Zp=est_z,
        est_Wp=est_w,
        se_Zp=se_z,
        se_Wp=se_w,
        ratio=float(ratio),
        se_ratio=float(se_ratio),
        mean_X=location[0][0],
        mean_Y=location[1][0],
        mean_U=location[2][0],
        mean_V=location[3][0],
        se_X=location[0][1],
        se_Y=location[1][1],
        se_U=location[2][1],
        se_V=location[3][1],
        realized_cov_UV=est_cov,
        se_cov_UV=se_cov,
        max_qv_ratio=max(bm.max_qv_ratio for bm in batches),
        moment_ratio_Z=float(moment_ratio_z),
        moment_ratio_W=float(moment_ratio_w),
    )
