import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from martingale_sim.frames import IncrementFrame
from utils.errors import ConstraintViolation

rows = arrays(np.float64, (8, 2), elements=st.floats(-10.0, 10.0, allow_nan=False))


@pytest.mark.parametrize("reflect", [False, True])
@pytest.mark.parametrize("b", [0.0, 0.5, 1.0])
def test_rotation_frames_are_admissible(reflect, b):
    theta = np.linspace(0.0, 2.0 * math.pi, 7)
    frame = IncrementFrame.rotation(theta, 0.3, b, 7, r=2.0, reflect=reflect)
    frame.check()
    np.testing.assert_allclose(frame.z_energy(), 8.0)
    np.testing.assert_allclose(frame.w_energy(), 8.0 * b * b)


def test_overlong_k_is_rejected():
    frame = IncrementFrame.rotation(0.0, 0.0, np.array([1.0, 1.5, 1.0]), 3)
    with pytest.raises(ConstraintViolation) as excinfo:
        frame.check()
    assert excinfo.value.path == 1
    assert excinfo.value.residuals["subordination"] > 0.0


def test_non_orthogonal_z_is_rejected_unless_allowed():
    h = np.array([[1.0, 0.0]])
    h_perp = np.array([[1.0, 1.0]])
    frame = IncrementFrame(h=h, h_perp=h_perp, k=np.zeros((1, 2)), k_perp=np.zeros((1, 2)))
    with pytest.raises(ConstraintViolation):
        frame.check()
    frame.check(z_orthogonal=False)


@settings(max_examples=200, deadline=None)
@given(h=rows, h_perp=rows)
def test_ab_transform_is_orthogonal_and_subordinate(h, h_perp):
    frame = IncrementFrame.ab_transform(h, h_perp)
    residuals = frame.residuals()
    assert np.all(residuals["w_norms"] <= 1e-12)
    assert np.all(residuals["w_orthogonal"] <= 1e-12)
    assert np.all(frame.w_energy() <= frame.z_energy() * (1.0 + 1e-12) + 1e-300)
    frame.check(z_orthogonal=False)


def test_ab_transform_is_isometric_on_rotation_rows():
    theta = np.linspace(0.0, 2.0 * math.pi, 9)
    z_rows = IncrementFrame.rotation(theta, 0.0, 0.0, 9)
    frame = IncrementFrame.ab_transform(z_rows.h, z_rows.h_perp)
    np.testing.assert_allclose(frame.w_energy(), frame.z_energy(), rtol=1e-14)


def test_apply():
    frame = IncrementFrame.rotation(0.0, 0.5 * math.pi, 1.0, 2)
    dx, dy, du, dv = frame.apply(np.array([[1.0, 0.0], [0.0, 2.0]]))
    np.testing.assert_allclose(dx, [1.0, 0.0])
    np.testing.assert_allclose(dy, [0.0, 2.0])
    np.testing.assert_allclose(du, [0.0, 2.0], atol=1e-15)
    np.testing.assert_allclose(dv, [-1.0, 0.0], atol=1e-15)
