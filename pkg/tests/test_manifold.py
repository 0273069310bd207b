import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from wavemanifold.core_model import DEFAULT_PARAMS, ModelParams, char_data, flux
from wavemanifold.errors import DegenerateRoot, EllipticState
from wavemanifold.manifold import (ManifoldPoint, chart_to_tilde, left_state, raise_both,
                                   raise_state, reflect, right_state, sigma, to_state_pair,
                                   u_flip, u_flip_state)

zs = st.floats(-6, 6, allow_nan=False)
taus = st.floats(-6, 6, allow_nan=False)
ys = st.floats(-6, 6, allow_nan=False)


def test_chart_to_tilde_value(P):
    assert np.allclose(chart_to_tilde(P, 1.0, 4.0), (1.0, 4.5), atol=1e-15)


@given(zs, taus)
def test_chart_satisfies_G(z, tau):
    c = DEFAULT_PARAMS.c
    ut, v1 = chart_to_tilde(DEFAULT_PARAMS, z, tau)
    assert abs((z * z - 1) * v1 - z * ut + c) <= 1e-9 * (1 + abs(tau)) * (1 + z * z) ** 1.5


def test_coincidence_curve_point(P):
    z0 = 0.7
    ut, v1 = chart_to_tilde(P, z0, 0.0)
    assert np.allclose((ut, v1), (2 * z0 / (z0 ** 2 + 1), 1 / (z0 ** 2 + 1)), atol=1e-15)


def test_example_anchor_states(P):
    assert np.allclose(left_state(P, (-2, -2, 0)), (-0.85, 3.2), atol=1e-12)
    w = left_state(P, (2.5, -1.5, 0))
    assert np.allclose(w, (-0.898, -4.612), atol=1e-3)
    assert np.allclose(left_state(P, (2, 4, 0)), (1.6, 7.2), atol=1e-12)


def test_sigma_value(P):
    assert abs(sigma(P, (1, 4, 0)) - 4.625) < 1e-14
    z = 0.3
    assert abs(sigma(P, (z, 0, 0)) - P.c / P.b1 * (P.b1 + 2) * z / (z * z + 1) - P.sigma0) < 1e-15


@given(zs, taus, ys)
def test_state_pair_rh_and_quotient(z, tau, y):
    P = DEFAULT_PARAMS
    sp = to_state_pair(P, (z, tau, y))
    scale = 1 + abs(z) ** 3 + abs(tau) * (1 + z * z) ** 2 + abs(y) * (1 + z * z)
    assert sp.rh_residual(P) <= 1e-12 * scale ** 2
    du = sp.left.u - sp.right.u
    if abs(du) > 1e-3:
        q = (flux(P, sp.left)[0] - flux(P, sp.right)[0]) / du
        assert abs(q - sp.sigma) <= 1e-8 * scale ** 2


@given(zs, taus, ys)
def test_reflect_involution_and_swap(z, tau, y):
    P = DEFAULT_PARAMS
    p = ManifoldPoint(z, tau, y)
    assert reflect(reflect(p)) == p
    assert sigma(P, reflect(p)) == sigma(P, p)
    assert np.allclose(left_state(P, reflect(p)), right_state(P, p), rtol=0, atol=0)


def test_reflect_example(P):
    assert reflect((1, 2, 0.5)) == (1, 2, -0.5)


def test_zero_y_means_equal_states(P):
    sp = to_state_pair(P, (0.3, -1.0, 0.0))
    assert sp.left == sp.right


@pytest.mark.parametrize("w,family,expected", [((-0.85, 3.2), "slow", (-2, -2, 0)),
                                               ((1.6, 7.2), "fast", (2, 4, 0)),
                                               ((1.413, 6.2), "fast", (2, 3.5, 0))])
def test_raise_state_examples(P, w, family, expected):
    p = raise_state(P, w, family)
    assert np.allclose(p, expected, atol=2e-3)
    assert p.y == 0.0


@given(zs, taus)
def test_raise_round_trip(z, tau):
    P = DEFAULT_PARAMS
    assume(abs(tau) > 1e-3 and abs(z) > 1e-3)
    w = left_state(P, (z, tau, 0))
    assume(char_data(P, w).delta > 1e-8)
    p = raise_state(P, w, "slow" if tau < 0 else "fast")
    assert abs(p.z - z) <= 1e-9 * (1 + abs(z)) ** 2
    assert abs(p.tau - tau) <= 1e-9 * (1 + abs(tau)) * (1 + z * z)


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_raise_both_speeds(u, v):
    P = DEFAULT_PARAMS
    cd = char_data(P, (u, v))
    assume(cd.delta > 1e-6)
    try:
        s, f = raise_both(P, (u, v))
    except DegenerateRoot:
        return
    assert s.tau < 0 < f.tau
    scale = 1 + abs(cd.lambda_s) + abs(cd.lambda_f)
    assert abs(sigma(P, s) - cd.lambda_s) <= 1e-8 * scale
    assert abs(sigma(P, f) - cd.lambda_f) <= 1e-8 * scale


def test_raise_errors(P):
    with pytest.raises(EllipticState):
        raise_state(P, (0.0, -0.5))
    with pytest.raises(EllipticState):
        raise_state(P, (0.0, 0.0))
    with pytest.raises(DegenerateRoot) as e:
        raise_state(P, (0.5, -1.0))  # v + a3 = 0 kills the leading coefficient
    assert e.value.finite_root is not None


def test_tau_recovery_near_z0(P):
    for z, tau in [(0.0, -1.0), (1e-9, 2.0), (0.05, -3.0)]:
        w = left_state(P, (z, tau, 0))
        p = raise_state(P, w, "slow" if tau < 0 else "fast")
        assert abs(p.z - z) < 1e-12 and abs(p.tau - tau) < 1e-12


@given(zs, taus, ys)
def test_u_flip_symmetry(z, tau, y):
    # negating u maps states of p to states of u_flip(p), swapped, and sigma to 2 sigma0 - sigma
    P = ModelParams(b1=5, a1=0.3, a2=-0.2, a3=0.9, a4=0.1)
    p = (z, tau, y)
    q = u_flip(p)
    assert abs(sigma(P, q) - (2 * P.sigma0 - sigma(P, p))) <= 1e-9 * (1 + abs(sigma(P, p)))
    wl = left_state(P, p)
    assert np.allclose(right_state(P, q), u_flip_state(P, wl), atol=1e-9 * (1 + abs(np.array(wl)).max()))
