import numpy as np
import pytest

from martingale_sim.brownian import bridge_path, brownian_increments
from utils.errors import DomainError


@pytest.mark.parametrize("method", ["bridge", "increments"])
def test_increment_shape_and_variance(method):
    rng = np.random.default_rng(7)
    db = brownian_increments(rng, 20_000, 8, 2.0, method)
    assert db.shape == (8, 20_000, 2)
    np.testing.assert_allclose(db.var(axis=1), 0.25, rtol=0.05)
    assert abs(float(np.mean(db[:, :, 0] * db[:, :, 1]))) < 0.02


def test_bridge_increments_sum_to_the_endpoint():
    path = bridge_path(np.random.default_rng(3), 10, 16, 1.0)
    assert path.shape == (17, 10, 2)
    np.testing.assert_array_equal(path[0], 0.0)
    db = brownian_increments(np.random.default_rng(3), 10, 16, 1.0)
    np.testing.assert_allclose(db.sum(axis=0), path[-1], atol=1e-12)


def test_bridge_keeps_coarse_levels():
    coarse = bridge_path(np.random.default_rng(11), 5, 8, 1.0)
    fine = bridge_path(np.random.default_rng(11), 5, 16, 1.0)
    np.testing.assert_array_equal(coarse[-1], fine[-1])
    np.testing.assert_array_equal(coarse[4], fine[8])


def test_bridge_needs_a_power_of_two():
    with pytest.raises(DomainError):
        brownian_increments(np.random.default_rng(0), 4, 6, 1.0)
    brownian_increments(np.random.default_rng(0), 4, 6, 1.0, "increments")


@pytest.mark.parametrize("args", [(0, 8, 1.0), (4, 0, 1.0), (4, 8, 0.0)])
def test_invalid_sizes(args):
    with pytest.raises(DomainError):
        brownian_increments(np.random.default_rng(0), *args)


def test_unknown_method():
    with pytest.raises(DomainError):
        brownian_increments(np.random.default_rng(0), 4, 8, 1.0, "euler")  # type: ignore[arg-type]
