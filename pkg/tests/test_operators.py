import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellman.obstacle import Obstacle
from bellman.operators import D_op, Dtilde_cleared, Dtilde_op, K_op, QuadFormCoeffs
from specfun.legendre import LegendreSolution, evaluate_series
from utils.errors import DomainError

interior = st.floats(min_value=-0.99, max_value=0.99)
coefficient = st.floats(min_value=-10.0, max_value=10.0)
exponent = st.floats(min_value=2.0, max_value=40.0)


def test_obstacle_endpoints():
    h = Obstacle(6.0, 2.5)
    assert h.value(1.0) == 1.0
    assert h.value(-1.0) == -(2.5**6)


@pytest.mark.parametrize("p, c", [(2.0, 0.0), (1.5, 1.0)])
def test_obstacle_rejects_bad_parameters(p, c):
    with pytest.raises(DomainError):
        Obstacle(p, c)


def test_obstacle_without_inflection_at_two():
    with pytest.raises(DomainError):
        Obstacle(2.0, 1.0).inflection_point()


@pytest.mark.parametrize("c", [1.0, 2.5, 3.7])
@pytest.mark.parametrize("s", [-0.7, 0.0, 0.4])
def test_K_annihilates_the_obstacle(s, c):
    p = 6.0
    h = Obstacle(p, c)
    assert abs(K_op(p, s, *h.jet(s))) <= 1e-9 * (1.0 + h.c_pow)


@pytest.mark.parametrize("c", [1.0, 2.5])
@pytest.mark.parametrize("s", np.linspace(-0.95, 0.95, 9))
def test_D_of_the_obstacle(s, c):
    p = 7.5
    h = Obstacle(p, c)
    expected = p / (p - 1.0) * (1.0 - s * s) * h.second(s)
    assert D_op(p, s, *h.jet(s)) == pytest.approx(expected, abs=1e-9 * (1.0 + h.c_pow))


@pytest.mark.parametrize("alpha", [2.0, 2.7])
def test_D_annihilates_f1(alpha):
    sol = LegendreSolution.from_alpha(alpha)
    for s in np.linspace(-0.5, 0.999, 50):
        rep = evaluate_series(sol, float(s))
        assert abs(D_op(sol.p, float(s), rep.value, rep.first, rep.second)) <= 1e-8


@pytest.mark.parametrize("s", [-1.0, 1.0, np.array([0.0, 1.0])])
def test_operators_reject_the_endpoints(s):
    with pytest.raises(DomainError):
        D_op(6.0, s, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        QuadFormCoeffs.from_jet(6.0, s, 1.0, 1.0, 1.0)


@given(exponent, interior, coefficient, coefficient, coefficient)
def test_cleared_Dtilde(p, s, g, g1, g2):
    expected = (1.0 - s * s) * Dtilde_op(p, s, g, g1, g2)
    assert Dtilde_cleared(p, s, g, g1, g2) == pytest.approx(expected, rel=1e-9, abs=1e-9)


@given(exponent, interior, coefficient, coefficient, coefficient)
def test_extreme_directions_reduce_to_the_operators(p, s, g, g1, g2):
    q = QuadFormCoeffs.from_jet(p, s, g, g1, g2)
    w = 1.0 - s * s
    minus = q.A - 2.0 * q.B + q.C
    plus = q.A + 2.0 * q.B + q.C
    size = 1.0 + abs(p * p * g) + abs(p * g1) / w + abs(g2)
    assert float(minus) == pytest.approx(4.0 * D_op(p, s, g, g1, g2) / w, abs=1e-9 * size / w)
    assert float(plus) == pytest.approx(4.0 * Dtilde_op(p, s, g, g1, g2), abs=1e-9 * size / w)


@given(exponent, interior, coefficient, coefficient, coefficient)
def test_cleared_coefficients_are_scaled_copies(p, s, g, g1, g2):
    plain = QuadFormCoeffs.from_jet(p, s, g, g1, g2)
    cleared = QuadFormCoeffs.cleared_from_jet(p, s, g, g1, g2)
    w = 1.0 - s * s
    size = 1.0 + abs(p * p * g) + abs(p * g1) + abs(g2)
    for name in ("phi_xx", "phi_yy", "phi_xy", "phi_x_over_x", "phi_y_over_y"):
        assert float(getattr(cleared, name)) == pytest.approx(w * float(getattr(plain, name)), abs=1e-9 * size)


def test_evaluate_shape_and_k_zero_direction():
    s = np.array([-0.5, 0.0, 0.5])
    q = QuadFormCoeffs.from_jet(6.0, s, np.ones(3), np.ones(3), np.ones(3))
    u = np.array([-1.0, 0.0, 1.0])
    b = np.array([0.0, 0.5, 1.0, 0.25])
    form = q.evaluate(u, b)
    assert form.shape == (3, 3, 4)
    np.testing.assert_allclose(form[:, :, 0], np.repeat(q.A[:, None], 3, axis=1))
    np.testing.assert_allclose(form[:, 2, 2], q.A + 2.0 * q.B + q.C)


def test_middle_residual_is_minus_infinity_for_negative_discriminant():
    q = QuadFormCoeffs(
        s=np.array([0.0]),
        phi_xx=np.array([-2.0]),
        phi_yy=np.array([-2.0]),
        phi_xy=np.array([0.5]),
        phi_x_over_x=np.array([0.0]),
        phi_y_over_y=np.array([0.0]),
    )
    assert q.discriminant[0] < 0.0
    assert q.middle_residual()[0] == -np.inf


def test_discriminant_on_the_legendre_branch():
    sol = LegendreSolution.from_p(6.0)
    s = np.linspace(0.7, 0.95, 20)
    reps = [evaluate_series(sol, float(x)) for x in s]
    g = np.array([r.value for r in reps])
    g1 = np.array([r.first for r in reps])
    g2 = np.array([r.second for r in reps])
    q = QuadFormCoeffs.from_jet(6.0, s, g, g1, g2)
    np.testing.assert_allclose(q.discriminant, 4.0 * 36.0 * g1**2, rtol=1e-7)
