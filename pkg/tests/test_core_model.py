import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavemanifold.core_model import (DEFAULT_PARAMS, ModelParams, char_data, discriminant,
                                     flux, is_strictly_hyperbolic, jacobian, load_params)
from wavemanifold.manifold import sigma

finite = st.floats(-20, 20, allow_nan=False)


def test_defaults_derived_constants():
    assert DEFAULT_PARAMS.c == 1.0
    assert DEFAULT_PARAMS.sigma0 == 0.0


@pytest.mark.parametrize("kw", [dict(b1=1.0), dict(b1=0.5), dict(a2=1.0, a3=1.0), dict(a2=2.0)])
def test_param_invariants(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


@pytest.mark.parametrize("w,expected", [((0, 0), (0, 0)), ((1, 0), (4.5, 1)), ((0, 1), (0.5, 0))])
def test_flux_values(P, w, expected):
    # g(0, 1) = u v + a3 u + a4 v vanishes for a4 = 0
    assert np.allclose(flux(P, w), expected, atol=0)


@given(finite, finite)
def test_flux_matches_direct_formula(u, v):
    P = ModelParams(b1=3.5, a1=0.2, a2=-0.4, a3=0.7, a4=1.1)
    f = (P.b1 + 1) * u * u / 2 + v * v / 2 + P.a1 * u + P.a2 * v
    g = u * v + P.a3 * u + P.a4 * v
    assert np.allclose(flux(P, (u, v)), (f, g), rtol=1e-14, atol=1e-12)


def test_discriminant_at_origin_is_zero(P):
    assert discriminant(P, 0.0, 0.0) == 0.0
    assert not is_strictly_hyperbolic(P, (0.0, 0.0))


def test_double_eigenvalue_on_ellipse(P):
    # at u = 0, delta = 4 v (v + 1) vanishes at v = -1
    cd = char_data(P, (0.0, -1.0))
    assert cd.delta == 0.0
    assert cd.lambda_s == cd.lambda_f


def test_elliptic_state_flagged(P):
    cd = char_data(P, (0.0, -0.5))
    assert cd.delta < 0 and cd.elliptic
    assert not is_strictly_hyperbolic(P, (0.0, -0.5))


def test_example2_slow_speed(P):
    cd = char_data(P, (-0.85, 3.2))
    assert is_strictly_hyperbolic(P, (-0.85, 3.2))
    assert abs(cd.lambda_s - sigma(P, (-2.0, -2.0, 0.0))) < 1e-12


def _fd_jacobian(P, w, h=1e-6):
    J = np.empty((2, 2))
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        J[:, k] = (np.array(flux(P, np.add(w, e))) - np.array(flux(P, np.subtract(w, e)))) / (2 * h)
    return J


@given(finite, finite)
def test_eigenvalues_match_fd_jacobian(u, v):
    P = DEFAULT_PARAMS
    cd = char_data(P, (u, v))
    J = _fd_jacobian(P, (u, v))
    assert np.allclose(J, jacobian(P, (u, v)), atol=1e-6)
    tr, det = np.trace(J), np.linalg.det(J)
    assert abs((tr * tr - 4 * det) - cd.delta) <= 1e-6 * max(1.0, abs(cd.delta))
    if cd.delta > 1e-6:
        ev = np.sort(np.linalg.eigvals(J).real)
        assert np.allclose(ev, [cd.lambda_s, cd.lambda_f], atol=1e-6 * (1 + abs(ev).max()))


def test_discriminant_zero_set_is_ellipse(P):
    # sample delta = 0, fit a conic, check its discriminant is negative
    th = np.linspace(0, 2 * np.pi, 60, endpoint=False)
    pts = []
    for t in th:
        d = np.array([np.cos(t), np.sin(t)])
        # delta along the ray from the interior point (0, -0.5) is quadratic in r
        f = lambda r: discriminant(P, *(np.array([0.0, -0.5]) + r * d))
        f0, f1, f2 = f(0.0), f(1.0), f(2.0)
        a = (f2 - 2 * f1 + f0) / 2
        b = f1 - f0 - a
        r = (-b + np.sqrt(b * b - 4 * a * f0)) / (2 * a)
        pts.append(np.array([0.0, -0.5]) + r * d)
    pts = np.array(pts)
    x, y = pts.T
    M = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    coef = np.linalg.svd(M)[2][-1]
    A, B, C = coef[:3]
    assert B * B - 4 * A * C < 0
    assert np.allclose(discriminant(P, x, y), 0, atol=1e-9)


def test_load_params_json_and_keyvalue(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"b1": 5, "a3": 2}))
    assert load_params(p) == ModelParams(b1=5, a3=2)
    q = tmp_path / "p.cfg"
    q.write_text("# comment\nb1 = 3\na1=0.5\n")
    assert load_params(q, a4=0.25) == ModelParams(b1=3, a1=0.5, a4=0.25)
    r = tmp_path / "bad.cfg"
    r.write_text("zz=1\n")
    with pytest.raises(KeyError):
        load_params(r)
