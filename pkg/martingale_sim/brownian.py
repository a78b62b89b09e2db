"""Planar Brownian increments for one batch of paths."""

from typing import Literal

import numpy as np

from utils.errors import DomainError

BrownianMethod = Literal["bridge", "increments"]


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def bridge_path(rng: np.random.Generator, m: int, n_steps: int, t_final: float) -> np.ndarray:
    """Dyadic Levy construction of B on the grid k * t_final / n_steps.

    The endpoint is drawn first, then midpoints level by level, so the first
    levels (and the coarse path) do not depend on n_steps.

    Returns:
        Array of shape (n_steps + 1, m, 2) with B(0) = 0
    """
    if not _is_power_of_two(n_steps):
        raise DomainError(f"the bridge construction needs n_steps to be a power of two, got {n_steps}")
    path = np.zeros((n_steps + 1, m, 2))
    path[-1] = np.sqrt(t_final) * rng.standard_normal((m, 2))
    span = n_steps
    while span > 1:
        half = span // 2
        left = np.arange(0, n_steps, span)
        mid, right = left + half, left + span
        # conditional variance of the midpoint is a quarter of the interval length
        sd = np.sqrt(t_final * span / n_steps / 4.0)
        noise = rng.standard_normal((left.size, m, 2))
        path[mid] = 0.5 * (path[left] + path[right]) + sd * noise
        span = half
    return path


def brownian_increments(
    rng: np.random.Generator,
    m: int,
    n_steps: int,
    t_final: float,
    method: BrownianMethod = "bridge",
) -> np.ndarray:
    """Increments dB of shape (n_steps, m, 2), each coordinate N(0, t_final / n_steps)."""
    if m < 1 or n_steps < 1 or not t_final > 0.0:
        raise DomainError(f"need m >= 1, n_steps >= 1 and t_final > 0, got {m}, {n_steps}, {t_final}")
    if method == "bridge":
        return np.diff(bridge_path(rng, m, n_steps, t_final), axis=0)
    if method == "increments":
        return np.sqrt(t_final / n_steps) * rng.standard_normal((n_steps, m, 2))
    raise DomainError(f"Unknown Brownian method: {method}. Valid options: ['bridge', 'increments']")
