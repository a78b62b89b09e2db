"""Differential operators of the one-dimensional Bellman inequalities.

All functions take the jet (g, g', g'') of a function at s and work on floats
and numpy arrays alike. On the simplex x + y = 1 with s = y - x, the second
derivatives of phi(x, y) = (x + y)^p g(s) reduce to combinations of the jet.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from utils.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def _check_open_interval(s: ArrayLike) -> None:
    if np.any(np.abs(s) >= 1.0):
        raise DomainError(f"operators need |s| < 1, got s={s}")


def D_op(p: float, s: ArrayLike, g: ArrayLike, g1: ArrayLike, g2: ArrayLike) -> ArrayLike:
    """Legendre operator ((1 - s^2) g')' + p g."""
    _check_open_interval(s)
    return (1.0 - s * s) * g2 - 2.0 * s * g1 + p * g


def K_op(p: float, s: ArrayLike, g: ArrayLike, g1: ArrayLike, g2: ArrayLike) -> ArrayLike:
    """p (p - 1) g - 2 (p - 1) s g' - (1 - s^2) g'', equal to phi_xy on the simplex."""
    _check_open_interval(s)
    return p * (p - 1.0) * g - 2.0 * (p - 1.0) * s * g1 - (1.0 - s * s) * g2


def Dtilde_op(p: float, s: ArrayLike, g: ArrayLike, g1: ArrayLike, g2: ArrayLike) -> ArrayLike:
    """D g / (1 - s^2) + K g."""
    return D_op(p, s, g, g1, g2) / (1.0 - s * s) + K_op(p, s, g, g1, g2)


def Dtilde_cleared(p: float, s: ArrayLike, g: ArrayLike, g1: ArrayLike, g2: ArrayLike) -> ArrayLike:
    """(1 - s^2) times D~g; same sign as D~g and bounded at s = +-1."""
    return D_op(p, s, g, g1, g2) + (1.0 - s * s) * K_op(p, s, g, g1, g2)


@dataclass(frozen=True)
class QuadFormCoeffs:
    """Coefficients of A |h|^2 + 2 B (h . k) + C |k|^2 at points of the simplex.

    A = phi_xx + phi_x / x, B = phi_xy, C = phi_yy + phi_y / y.
    """

    s: np.ndarray
    phi_xx: np.ndarray
    phi_yy: np.ndarray
    phi_xy: np.ndarray
    phi_x_over_x: np.ndarray
    phi_y_over_y: np.ndarray

    @classmethod
    def from_jet(cls, p: float, s: ArrayLike, g: ArrayLike, g1: ArrayLike, g2: ArrayLike) -> "QuadFormCoeffs":
        _check_open_interval(s)
        s, g, g1, g2 = (np.asarray(v, dtype=float) for v in (s, g, g1, g2))
        return cls(
            s=s,
            phi_xx=p * (p - 1.0) * g - 2.0 * (p - 1.0) * (1.0 + s) * g1 + (1.0 + s) ** 2 * g2,
            phi_yy=p * (p - 1.0) * g + 2.0 * (p - 1.0) * (1.0 - s) * g1 + (1.0 - s) ** 2 * g2,
            phi_xy=np.asarray(K_op(p, s, g, g1, g2)),
            phi_x_over_x=2.0 * p / (1.0 - s) * g - 2.0 * (1.0 + s) / (1.0 - s) * g1,
            phi_y_over_y=2.0 * p / (1.0 + s) * g + 2.0 * (1.0 - s) / (1.0 + s) * g1,
        )

    @classmethod
    def cleared_from_jet(
        cls, p: float, s: ArrayLike, g: ArrayLike, g1: ArrayLike, g2: ArrayLike
    ) -> "QuadFormCoeffs":
        """All coefficients multiplied by 1 - s^2 > 0, without division by 1 -+ s."""
        _check_open_interval(s)
        s, g, g1, g2 = (np.asarray(v, dtype=float) for v in (s, g, g1, g2))
        w = (1.0 - s) * (1.0 + s)
        plain = cls.from_jet(p, s, g, g1, g2)
        return cls(
            s=s,
            phi_xx=w * plain.phi_xx,
            phi_yy=w * plain.phi_yy,
            phi_xy=w * plain.phi_xy,
            phi_x_over_x=(1.0 + s) * (2.0 * p * g - 2.0 * (1.0 + s) * g1),
            phi_y_over_y=(1.0 - s) * (2.0 * p * g + 2.0 * (1.0 - s) * g1),
        )

    @property
    def A(self) -> np.ndarray:
        return self.phi_xx + self.phi_x_over_x

    @property
    def B(self) -> np.ndarray:
        return self.phi_xy

    @property
    def C(self) -> np.ndarray:
        return self.phi_yy + self.phi_y_over_y

    @property
    def discriminant(self) -> np.ndarray:
        return self.B**2 - self.A * self.C

    def evaluate(self, u: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Form value for |h| = 1, |k| = b and cosine u of the angle between h and k.

        Returns an array of shape (len(s), len(u), len(b)).
        """
        A, B, C = (np.atleast_1d(v)[:, None, None] for v in (self.A, self.B, self.C))
        u = np.asarray(u, dtype=float)[None, :, None]
        b = np.asarray(b, dtype=float)[None, None, :]
        return A + 2.0 * B * u * b + C * b * b

    def middle_residual(self) -> np.ndarray:
        """||B| - sqrt(discriminant)| - |A| where the discriminant is nonnegative, else -inf."""
        disc = self.discriminant
        root = np.sqrt(np.where(disc >= 0.0, disc, 0.0))
        return np.where(disc >= 0.0, np.abs(np.abs(self.B) - root) - np.abs(self.A), -np.inf)
