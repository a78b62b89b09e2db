import math
from fractions import Fraction

import numpy as np
import pytest

from specfun.rodrigues import MAX_DEGREE, polynomial_roots, rodrigues_eval, rodrigues_polynomial
from utils.errors import DomainError


def test_degree_two():
    assert rodrigues_polynomial(2) == (Fraction(-1, 2), Fraction(0), Fraction(3, 2))


def test_degree_three():
    assert rodrigues_polynomial(3) == (Fraction(0), Fraction(-3, 2), Fraction(0), Fraction(5, 2))


@pytest.mark.parametrize("n", range(1, MAX_DEGREE + 1))
def test_normalised_at_one(n):
    coeffs = rodrigues_polynomial(n)
    assert rodrigues_eval(coeffs, 1.0) == 1.0
    assert rodrigues_eval(coeffs, -1.0) == (-1.0) ** n


@pytest.mark.parametrize("n", [0, MAX_DEGREE + 1, -3])
def test_degree_out_of_range(n):
    with pytest.raises(DomainError):
        rodrigues_polynomial(n)


def test_rodrigues_eval_at_half():
    assert rodrigues_eval(rodrigues_polynomial(2), 0.5) == -0.125


def test_roots_of_degree_two_and_three():
    r2 = polynomial_roots(rodrigues_polynomial(2))
    np.testing.assert_allclose(r2, [-1.0 / math.sqrt(3.0), 1.0 / math.sqrt(3.0)], rtol=1e-14)
    r3 = polynomial_roots(rodrigues_polynomial(3))
    np.testing.assert_allclose(r3, [-math.sqrt(0.6), 0.0, math.sqrt(0.6)], atol=1e-14)
