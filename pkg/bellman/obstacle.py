"""The obstacle h_c(s) = ((1+s)/2)^p - c^p ((1-s)/2)^p.

It is the trace of y^p - c^p x^p on the simplex x + y = 1 under
s = (y - x) / (x + y).
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from utils.errors import DomainError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Obstacle:
    """h_c together with its first two derivatives; works on floats and arrays."""

    p: float
    c: float

    def __post_init__(self) -> None:
        if not self.p >= 2.0:
            raise DomainError(f"p must be >= 2, got {self.p}")
        if not self.c > 0.0:
            raise DomainError(f"c must be positive, got {self.c}")

    @property
    def c_pow(self) -> float:
        return self.c**self.p

    def value(self, s: ArrayLike) -> ArrayLike:
        y, x = (1.0 + s) / 2.0, (1.0 - s) / 2.0
        return y**self.p - self.c_pow * x**self.p

    def first(self, s: ArrayLike) -> ArrayLike:
        y, x = (1.0 + s) / 2.0, (1.0 - s) / 2.0
        return 0.5 * self.p * (y ** (self.p - 1.0) + self.c_pow * x ** (self.p - 1.0))

    def second(self, s: ArrayLike) -> ArrayLike:
        y, x = (1.0 + s) / 2.0, (1.0 - s) / 2.0
        return 0.25 * self.p * (self.p - 1.0) * (y ** (self.p - 2.0) - self.c_pow * x ** (self.p - 2.0))

    def jet(self, s: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
        return self.value(s), self.first(s), self.second(s)

    def inflection_point(self) -> float:
        """The zero i of h_c'' in (-1, 1): ((1+i)/(1-i))^(p-2) = c^p.

        Raises:
            DomainError: At p = 2, where h_c'' is constant
        """
        if self.p == 2.0:
            raise DomainError("h_c has no inflection point at p = 2")
        q = self.c ** (self.p / (self.p - 2.0))
        return (q - 1.0) / (q + 1.0)
