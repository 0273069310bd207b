"""The (z, tau, Y) chart of the wave manifold.

A point stands for a shock between a left state (u, v) and a right state
(u', v').  Y = v - v', X = u - u' = z Y, and (z, tau) fix the midpoint.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core_model import ModelParams, State, discriminant, flux
from .errors import DegenerateRoot, EllipticState

Z_MAX = 50.0


class ManifoldPoint(NamedTuple):
    z: float
    tau: float
    y: float

    def as_array(self):
        return np.array([self.z, self.tau, self.y])


@dataclass(frozen=True)
class StatePair:
    left: State
    right: State
    sigma: float

    def rh_residual(self, params: ModelParams) -> float:
        fl = np.array(flux(params, self.left))
        fr = np.array(flux(params, self.right))
        jump = np.array(self.left) - np.array(self.right)
        return float(np.linalg.norm(fl - fr - self.sigma * jump))


def chart_to_tilde(params: ModelParams, z, tau):
    c = params.c
    r = z * z + 1
    ut = 2 * c * z / r + c * tau * (z * z - 1)
    v1 = c / r + c * tau * z
    return ut, v1


def midpoint(params: ModelParams, z, tau):
    ut, v1 = chart_to_tilde(params, z, tau)
    U = (ut - params.a1 + params.a4) / params.b1
    V = v1 - params.a3
    return U, V


def states(params: ModelParams, z, tau, y):
    """Left and right states, vectorised: returns (u, v, u', v')."""
    U, V = midpoint(params, z, tau)
    x = z * y
    return U + 0.5 * x, V + 0.5 * y, U - 0.5 * x, V - 0.5 * y


def sigma_zt(params: ModelParams, z, tau):
    c, b1 = params.c, params.b1
    return (c / b1) * ((b1 + 1) * z * z - 1) * tau + (c / b1) * (b1 + 2) * z / (z * z + 1) + params.sigma0


def sigma(params: ModelParams, p) -> float:
    return float(sigma_zt(params, p[0], p[1]))


def left_state(params: ModelParams, p) -> State:
    u, v, _, _ = states(params, p[0], p[1], p[2])
    return State(float(u), float(v))


def right_state(params: ModelParams, p) -> State:
    _, _, u, v = states(params, p[0], p[1], p[2])
    return State(float(u), float(v))


def to_state_pair(params: ModelParams, p) -> StatePair:
    u, v, u2, v2 = states(params, p[0], p[1], p[2])
    return StatePair(State(float(u), float(v)), State(float(u2), float(v2)), sigma(params, p))


def reflect(p) -> ManifoldPoint:
    return ManifoldPoint(p[0], p[1], -p[2])


def u_flip(p) -> ManifoldPoint:
    """Chart image of the symmetry that negates the u-like coordinate.

    Sends sigma to 2*sigma0 - sigma and swaps left and right states, so it
    exchanges the slow and fast families.
    """
    return ManifoldPoint(-p[0], -p[1], -p[2])


def u_flip_state(params: ModelParams, w) -> State:
    """State-space companion of u_flip (only the midpoint chart is needed)."""
    ut = params.b1 * w[0] + params.a1 - params.a4
    v1 = w[1] + params.a3
    return State((-ut - params.a1 + params.a4) / params.b1, v1 - params.a3)


def tau_from_tilde(params: ModelParams, z, ut, v1):
    c = params.c
    if abs(z) < 0.1 and abs(z * z - 1) > 0.5:
        return (ut - 2 * c * z / (z * z + 1)) / (c * (z * z - 1))
    return (v1 - c / (z * z + 1)) / (c * z)


def raise_both(params: ModelParams, w):
    """Both points of C over a hyperbolic state, ordered (slow, fast)."""
    u, v = float(w[0]), float(w[1])
    d = float(discriminant(params, u, v))
    if d <= 0:
        raise EllipticState(f"state ({u}, {v}) is not strictly hyperbolic (delta={d:.3e})")
    ut = params.b1 * u + params.a1 - params.a4
    v1 = v + params.a3
    c = params.c
    # v1 z^2 - ut z - (v1 - c) = 0
    if abs(v1) <= 1e-14 * max(1.0, abs(ut)):
        z = c / ut
        tau = tau_from_tilde(params, z, ut, v1)
        raise DegenerateRoot("one root of the lifting quadratic is at z = infinity",
                             finite_root=ManifoldPoint(z, tau, 0.0))
    sq = np.sqrt(d)
    q = -0.5 * (-ut + np.copysign(sq, -ut))
    roots = [q / v1, -(v1 - c) / q] if q != 0 else [0.0, 0.0]
    pts = [ManifoldPoint(float(z), float(tau_from_tilde(params, z, ut, v1)), 0.0) for z in roots]
    pts.sort(key=lambda p: p.tau)
    return pts[0], pts[1]


def raise_state(params: ModelParams, w, family="slow") -> ManifoldPoint:
    slow, fast = raise_both(params, w)
    return slow if family == "slow" else fast


def near_infinity(p, z_max=Z_MAX) -> bool:
    return abs(p[0]) > z_max
