import numpy as np
import pytest

from bellman.candidate import BellmanCandidate
from sharp_constant.constants import compute_sharp_constants
from specfun.legendre import LegendreSolution
from utils.errors import DomainError


def test_candidate_needs_p_above_two():
    sol = LegendreSolution.from_p(2.0)
    with pytest.raises(DomainError):
        BellmanCandidate(consts=compute_sharp_constants(2.0, sol=sol), sol=sol)


def test_candidate_needs_matching_solution(consts6):
    with pytest.raises(DomainError):
        BellmanCandidate(consts=consts6, sol=LegendreSolution.from_p(12.0))


def test_branches_meet_at_zero(candidate6):
    z = candidate6.consts.z_p
    left = candidate6.jet(z, "left")
    right = candidate6.jet(z, "right")
    assert abs(left[0] - right[0]) <= 1e-9
    assert abs(left[1] - right[1]) <= 1e-9
    # g'' jumps up across z_p
    assert left[2] < 0.0 < right[2]


def test_candidate_majorises_the_obstacle(candidate6):
    s = np.linspace(-1.0, 1.0, 801)
    g = np.array([candidate6.value(float(x)) for x in s])
    h = candidate6.obstacle.value(s)
    assert np.all(g - h >= -1e-12 * (1.0 + np.abs(h)))
    left = s < candidate6.consts.z_p
    np.testing.assert_allclose(g[left], h[left], rtol=1e-13)


def test_value_at_one_is_the_amplitude(candidate6):
    assert candidate6.value(1.0) == pytest.approx(candidate6.amplitude, rel=1e-13)
    assert candidate6.reconstruct_phi(0.0, 1.0) == pytest.approx(candidate6.amplitude, rel=1e-13)


@pytest.mark.parametrize("x, y", [(0.3, 0.7), (1.0, 0.2), (2.0, 5.0)])
def test_phi_is_homogeneous(candidate6, x, y):
    phi = candidate6.reconstruct_phi(x, y)
    assert candidate6.reconstruct_phi(3.0 * x, 3.0 * y) == pytest.approx(3.0**6 * phi, rel=1e-12)


@pytest.mark.parametrize("x, y", [(0.0, 0.0), (-1.0, 1.0), (1.0, -0.5)])
def test_phi_domain(candidate6, x, y):
    with pytest.raises(DomainError):
        candidate6.reconstruct_phi(x, y)


def test_jet_outside_interval(candidate6):
    with pytest.raises(DomainError):
        candidate6.jet(1.5)


def test_jet_values_branches(candidate6):
    z = candidate6.consts.z_p
    s = np.array([-0.9, z - 0.01, z, z + 0.01, 0.99])
    jets = candidate6.jet_values(s)
    np.testing.assert_array_equal(jets.legendre_branch, [False, False, True, True, True])
    assert jets.scale.shape == (5,)
    assert jets.g[1] == pytest.approx(float(candidate6.obstacle.value(s[1])), rel=1e-13)


def test_candidate_table(candidate6):
    s = np.linspace(-0.99, 0.99, 101)
    table = candidate6.candidate_table(s)
    assert list(table.columns) == ["s", "g", "g_prime", "g_second", "Dg", "Dtilde_g"]
    right = table[table["s"] > candidate6.consts.z_p]
    assert (right["Dg"].abs() <= 1e-8 * (1.0 + right["g"].abs() + right["g_prime"].abs())).all()
    assert (table["Dg"] <= 1e-8).all()


def test_candidate_table_rejects_endpoints(candidate6):
    with pytest.raises(DomainError):
        candidate6.candidate_table(np.array([0.0, 1.0]))


def test_k_sign_table(candidate6):
    s, sign = candidate6.k_sign_table(201)
    assert s.shape == sign.shape == (201,)
    assert set(np.unique(sign)) <= {-1.0, 0.0, 1.0}


def test_override_keeps_zero_and_amplitude(consts6, sol6):
    candidate = BellmanCandidate(consts=consts6, sol=sol6, override_c=0.99 * consts6.c_p)
    assert candidate.c == pytest.approx(0.99 * consts6.c_p)
    assert candidate.amplitude == consts6.a_p
    assert candidate.obstacle.value(consts6.z_p) > 0.0
