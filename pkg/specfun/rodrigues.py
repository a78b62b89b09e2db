"""Legendre polynomials from the Rodrigues formula, in exact rational arithmetic.

    L_n(s) = 1 / (2^n n!) * d^n/ds^n (s^2 - 1)^n
"""

import math
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from utils.errors import DomainError

MAX_DEGREE = 30

Polynomial = Tuple[Fraction, ...]


def _multiply(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _differentiate(a: List[Fraction]) -> List[Fraction]:
    return [k * a[k] for k in range(1, len(a))] or [Fraction(0)]


def rodrigues_polynomial(n: int) -> Polynomial:
    """Exact coefficients of L_n in ascending powers of s.

    Args:
        n: Degree, 1 <= n <= 30

    Returns:
        Tuple of Fractions (c_0, ..., c_n) with L_n(s) = sum c_k s^k and L_n(1) = 1

    Raises:
        DomainError: If n is outside [1, 30]

    Examples:
        >>> rodrigues_polynomial(2)
        (Fraction(-1, 2), Fraction(0, 1), Fraction(3, 2))
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_DEGREE:
        raise DomainError(f"degree must be an integer in [1, {MAX_DEGREE}], got {n}")
    power = [Fraction(1)]
    for _ in range(n):
        power = _multiply(power, [Fraction(-1), Fraction(0), Fraction(1)])
    for _ in range(n):
        power = _differentiate(power)
    scale = Fraction(1, 2**n * math.factorial(n))
    coeffs = tuple(c * scale for c in power)
    if sum(coeffs) != 1:
        raise DomainError(f"exact arithmetic lost the normalisation L_{n}(1) = 1")
    return coeffs


def rodrigues_eval(coeffs: Polynomial, s: float) -> float:
    """Evaluate a polynomial exactly at the binary value of s, rounded once."""
    x = Fraction(s)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return float(acc)


def polynomial_roots(coeffs: Polynomial) -> np.ndarray:
    """Real roots of the polynomial, ascending."""
    roots = np.polynomial.polynomial.polyroots([float(c) for c in coeffs])
    real = roots[np.abs(roots.imag) < 1e-12].real
    return np.sort(real)
