"""Increment frames of two-dimensional martingales on a planar Brownian filtration.

A frame holds the rows h, h', k, k' of the strategy matrix for one time step
and a batch of paths: dX = h . dB, dY = h' . dB, dU = k . dB, dV = k' . dB.
Every row array has shape (m, 2).
"""

from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

from utils.errors import ConstraintViolation

ArrayLike = Union[float, np.ndarray]
FRAME_TOL = 1e-12


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", a, b)


def _unit(angle: ArrayLike, m: int) -> np.ndarray:
    angle = np.broadcast_to(np.asarray(angle, dtype=float), (m,))
    return np.stack([np.cos(angle), np.sin(angle)], axis=1)


def _perp(angle: ArrayLike, m: int, reflect: bool) -> np.ndarray:
    angle = np.broadcast_to(np.asarray(angle, dtype=float), (m,))
    if reflect:
        return np.stack([np.sin(angle), -np.cos(angle)], axis=1)
    return np.stack([-np.sin(angle), np.cos(angle)], axis=1)


@dataclass(frozen=True)
class IncrementFrame:
    h: np.ndarray
    h_perp: np.ndarray
    k: np.ndarray
    k_perp: np.ndarray

    @property
    def size(self) -> int:
        return self.h.shape[0]

    @classmethod
    def rotation(
        cls,
        theta: ArrayLike,
        psi: ArrayLike,
        b: ArrayLike,
        m: int,
        r: float = 1.0,
        reflect: bool = False,
    ) -> "IncrementFrame":
        """h = r(cos theta, sin theta), h' = r(-sin theta, cos theta), k and k' likewise with psi, scaled by b.

        With ``reflect`` the Z rows take the other orientation, h' = r(sin theta, -cos theta).
        """
        scale = r * np.broadcast_to(np.asarray(b, dtype=float), (m,))[:, None]
        return cls(
            h=r * _unit(theta, m),
            h_perp=r * _perp(theta, m, reflect),
            k=scale * _unit(psi, m),
            k_perp=scale * _perp(psi, m, False),
        )

    @classmethod
    def ab_transform(cls, h: np.ndarray, h_perp: np.ndarray, scale: float = 0.5) -> "IncrementFrame":
        """W = A * Z: u1 = -x1 - y2, v1 = x2 - y1, u2 = x2 - y1, v2 = x1 + y2, times ``scale``.

        W is orthogonal for any Z rows; d<W,W> <= 4 scale^2 d<Z,Z>.
        """
        x1, x2 = h[:, 0], h[:, 1]
        y1, y2 = h_perp[:, 0], h_perp[:, 1]
        u = np.stack([-x1 - y2, x2 - y1], axis=1)
        v = np.stack([x2 - y1, x1 + y2], axis=1)
        return cls(h=h, h_perp=h_perp, k=scale * u, k_perp=scale * v)

    def z_energy(self) -> np.ndarray:
        """|h|^2 + |h'|^2 per path, the rate of d<Z,Z>."""
        return _dot(self.h, self.h) + _dot(self.h_perp, self.h_perp)

    def w_energy(self) -> np.ndarray:
        """|k|^2 + |k'|^2 per path, the rate of d<W,W>."""
        return _dot(self.k, self.k) + _dot(self.k_perp, self.k_perp)

    def residuals(self, subordination: float = 1.0) -> Dict[str, np.ndarray]:
        """Per-path constraint residuals, relative to the size of the Z rows.

        Orthogonality residuals are absolute deviations; the subordination
        residual is positive when |k|^2 + |k'|^2 exceeds the allowed multiple
        of |h|^2 + |h'|^2.
        """
        norm = 1.0 + self.z_energy()
        return {
            "z_norms": np.abs(_dot(self.h, self.h) - _dot(self.h_perp, self.h_perp)) / norm,
            "z_orthogonal": np.abs(_dot(self.h, self.h_perp)) / norm,
            "w_norms": np.abs(_dot(self.k, self.k) - _dot(self.k_perp, self.k_perp)) / norm,
            "w_orthogonal": np.abs(_dot(self.k, self.k_perp)) / norm,
            "subordination": (self.w_energy() - subordination * self.z_energy()) / norm,
        }

    def check(self, z_orthogonal: bool = True, subordination: float = 1.0, tol: float = FRAME_TOL) -> None:
        """Reject the frame when any path leaves the admissible set.

        Raises:
            ConstraintViolation: With the worst path and its residuals
        """
        residuals = self.residuals(subordination)
        names = [name for name in residuals if z_orthogonal or not name.startswith("z_")]
        worst = np.max(np.stack([residuals[name] for name in names]), axis=0)
        if np.all(worst <= tol):
            return
        path = int(np.argmax(worst))
        found = {name: float(residuals[name][path]) for name in names}
        raise ConstraintViolation(
            f"frame violates the admissible set on path {path} (tolerance {tol}): {found}", path, found
        )

    def apply(self, db: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Increments (dX, dY, dU, dV) for Brownian increments db of shape (m, 2)."""
        return _dot(self.h, db), _dot(self.h_perp, db), _dot(self.k, db), _dot(self.k_perp, db)
