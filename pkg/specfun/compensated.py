"""Error-free transformations and double-double arithmetic.

A double-double number is a pair (hi, lo) of floats with |lo| <= ulp(hi)/2
representing hi + lo exactly. The routines here are the classical Dekker /
Knuth building blocks; they need round-to-nearest IEEE doubles and no fma.
"""

from typing import Tuple

DD = Tuple[float, float]

# 2**27 + 1, splits a double into two 26-bit halves
_SPLITTER = 134217729.0

DD_ZERO: DD = (0.0, 0.0)
DD_ONE: DD = (1.0, 0.0)


def two_sum(a: float, b: float) -> DD:
    """Return (s, e) with s = fl(a + b) and s + e = a + b exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a: float, b: float) -> DD:
    """two_sum for |a| >= |b|."""
    s = a + b
    return s, b - (s - a)


def split(a: float) -> DD:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> DD:
    """Return (p, e) with p = fl(a * b) and p + e = a * b exactly."""
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(x: DD, y: DD) -> DD:
    s, e = two_sum(x[0], y[0])
    e += x[1] + y[1]
    return quick_two_sum(s, e)


def dd_mul(x: DD, y: DD) -> DD:
    p, e = two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return quick_two_sum(p, e)


def dd_mul_float(x: DD, b: float) -> DD:
    p, e = two_prod(x[0], b)
    e += x[1] * b
    return quick_two_sum(p, e)


def dd_div_float(x: DD, d: float) -> DD:
    """Divide a double-double by a float."""
    if d == 0.0:
        raise ZeroDivisionError("double-double division by zero")
    q1 = x[0] / d
    p, e = two_prod(q1, d)
    s, f = two_sum(x[0], -p)
    f = f - e + x[1]
    q2 = (s + f) / d
    return quick_two_sum(q1, q2)


def dd_abs(x: DD) -> float:
    """Magnitude of a double-double, rounded to a float."""
    return abs(x[0] + x[1])


def dd_to_float(x: DD) -> float:
    return x[0] + x[1]
