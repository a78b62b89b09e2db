from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from specfun.compensated import (
    dd_add,
    dd_div_float,
    dd_mul,
    dd_mul_float,
    dd_to_float,
    quick_two_sum,
    two_prod,
    two_sum,
)

finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False)
# integers times a moderate power of two, so products neither overflow nor underflow
scaled = st.builds(lambda m, e: m * 2.0**e, st.integers(-(2**53), 2**53), st.integers(-60, 60))


def exact(x) -> Fraction:
    return Fraction(x[0]) + Fraction(x[1])


@given(finite, finite)
def test_two_sum_is_exact(a, b):
    s, e = two_sum(a, b)
    assert s == a + b
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


@given(scaled, scaled)
def test_two_prod_is_exact(a, b):
    p, e = two_prod(a, b)
    assert p == a * b
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_quick_two_sum_keeps_the_rounding_error():
    s, e = quick_two_sum(1.0, 1e-20)
    assert (s, e) == (1.0, 1e-20)


def test_dd_add_recovers_digits_lost_in_plain_floats():
    x = dd_add((1.0, 0.0), (1e-20, 0.0))
    y = dd_add(x, (-1.0, 0.0))
    assert dd_to_float(y) == 1e-20


def test_dd_mul_matches_exact_product():
    a = (1.0 + 2.0**-30, 2.0**-80)
    b = (3.0, 2.0**-70)
    error = abs(exact(dd_mul(a, b)) - exact(a) * exact(b))
    assert error < Fraction(1, 2**100)


def test_dd_mul_float_matches_exact_product():
    a = (1.0 / 3.0, 1e-17)
    error = abs(exact(dd_mul_float(a, 7.0)) - exact(a) * 7)
    assert error < Fraction(1, 2**100)


def test_dd_div_float_one_third():
    q = dd_div_float((1.0, 0.0), 3.0)
    assert abs(exact(q) - Fraction(1, 3)) < Fraction(1, 10**30)


def test_dd_div_float_by_zero():
    with pytest.raises(ZeroDivisionError):
        dd_div_float((1.0, 0.0), 0.0)
