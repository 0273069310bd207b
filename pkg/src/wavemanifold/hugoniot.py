"""Hugoniot and Hugoniot' curves in closed form.

The Hugoniot curve of a point is the set of shocks sharing its left state;
the Hugoniot' curve shares its right state and is the mirror image under
Y -> -Y.  Both are rational in z.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_model import ModelParams
from .manifold import ManifoldPoint, chart_to_tilde, sigma_zt


@dataclass(frozen=True)
class HugoniotCoeffs:
    params: ModelParams
    z0: float
    tau0: float
    y0: float
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    G: float
    vartheta0: float

    @property
    def base(self):
        return ManifoldPoint(self.z0, self.tau0, self.y0)


def hugoniot_coeffs(params: ModelParams, p) -> HugoniotCoeffs:
    z0, t0, y0 = (float(x) for x in p)
    b1, c = params.b1, params.c
    th = z0 * z0 + 1
    k = 2 * c * t0 * z0 + y0
    A = -(2 * c + k * th)
    B = 4 * c * z0 + 2 * c * t0 * (z0 * z0 - 1) * th + b1 * y0 * z0 * th
    C = -2 * c * z0 * z0 + k * th
    D = 2 * c * b1 + b1 * k * th
    E = -2 * c * t0 * (z0 * z0 - 1) * th - b1 * z0 * y0 * th - 4 * c * z0
    F = (4 * c + b1 * k) * th - 2 * c * b1 * z0 * z0
    return HugoniotCoeffs(params, z0, t0, y0, A, B, C, D, E, F, E, th)


def _tau_y(h: HugoniotCoeffs, z):
    b1, c = h.params.b1, h.params.c
    z2 = z * z
    y = (h.A * z2 + h.B * z + h.C) / (h.vartheta0 * ((b1 - 1) * z2 + 1))
    tau = (((h.D * z + h.E) * z + h.F) * z + h.G) / (
        2 * h.vartheta0 * c * ((b1 - 1) * z2 * z2 + b1 * z2 + 1))
    return tau, y


def hugoniot_arrays(h: HugoniotCoeffs, z):
    z = np.asarray(z, dtype=float)
    tau, y = _tau_y(h, z)
    return z, tau, y


def hugoniot_at(h: HugoniotCoeffs, z) -> ManifoldPoint:
    tau, y = _tau_y(h, float(z))
    return ManifoldPoint(float(z), float(tau), float(y))


def hugoniot_prime_coeffs(params: ModelParams, p) -> HugoniotCoeffs:
    """Coefficients for the Hugoniot' curve through p (built from the reflected base)."""
    return hugoniot_coeffs(params, (p[0], p[1], -p[2]))


def hugoniot_prime_at(hp: HugoniotCoeffs, z) -> ManifoldPoint:
    """Evaluate a Hugoniot' curve; hp must come from hugoniot_prime_coeffs."""
    tau, y = _tau_y(hp, float(z))
    return ManifoldPoint(float(z), float(tau), -float(y))


def sigma_along_hugoniot(h: HugoniotCoeffs, z):
    """Shock speed along the curve as a single rational function of z."""
    b1, c = h.params.b1, h.params.c
    z0, t0, y0, th = h.z0, h.tau0, h.y0, h.vartheta0
    tp, tm = b1 + 1, b1 - 1
    sp3 = b1 * tp * (y0 * th + 2 * c * (1 + z0 * t0 * th))
    sp2 = tp * (b1 * z0 * y0 * th + 2 * c * (2 * z0 + t0 * z0 ** 4 - t0))
    sp1 = b1 * (y0 * th + 2 * c * (z0 * t0 * th - 2 * z0 * z0 - 1))
    sp0 = b1 * z0 * y0 * th + 2 * c * (2 * z0 + t0 * z0 ** 4 - t0)
    z = np.asarray(z, dtype=float)
    num = ((sp3 * z - sp2) * z - sp1) * z + sp0
    out = num / (2 * b1 * th * (tm * z * z + 1)) + h.params.sigma0
    return out if out.ndim else float(out)


def dsigma_dz_along_hugoniot(h: HugoniotCoeffs, z, eps=1e-6):
    z = np.asarray(z, dtype=float)
    step = eps * np.maximum(1.0, np.abs(z))
    return (sigma_along_hugoniot(h, z + step) - sigma_along_hugoniot(h, z - step)) / (2 * step)


def intersections_with_C(h: HugoniotCoeffs, tol=1e-12):
    """Points where the curve meets Y = 0, labelled by family via sign(tau)."""
    A, B, C = h.A, h.B, h.C
    disc = B * B - 4 * A * C
    scale = max(1.0, B * B)
    if abs(A) < 1e-14 * max(1.0, abs(B), abs(C)):
        if B == 0:
            return []
        zs = [-C / B]
    elif abs(disc) <= tol * scale:
        zs = [-B / (2 * A)]
    elif disc < 0:
        return []
    else:
        sq = np.sqrt(disc)
        q = -0.5 * (B + np.copysign(sq, B))
        zs = sorted([q / A, C / q])
    out = []
    for z in zs:
        tau, _ = _tau_y(h, z)
        out.append(ManifoldPoint(float(z), float(tau), 0.0))
    out.sort(key=lambda p: p.tau)
    return out


def label_family(p) -> str:
    if p.tau < 0:
        return "slow"
    if p.tau > 0:
        return "fast"
    return "coincidence"


def hugoniot_linear_solve(params: ModelParams, p, z):
    """Independent route: solve the two linear conditions left(z, tau, Y) = left(p).

    Returns (tau, Y).  Used only as a cross-check of the closed form.
    """
    b1, c = params.b1, params.c
    ut0, v10 = chart_to_tilde(params, p[0], p[1])
    lu = ut0 + 0.5 * b1 * p[0] * p[2]
    lv = v10 + 0.5 * p[2]
    r = z * z + 1
    # ut(z, tau) + b1 z Y / 2 = lu ; v1(z, tau) + Y / 2 = lv
    M = np.array([[c * (z * z - 1), 0.5 * b1 * z], [c * z, 0.5]])
    rhs = np.array([lu - 2 * c * z / r, lv - c / r])
    tau, y = np.linalg.solve(M, rhs)
    return float(tau), float(y)


def sigma_on_C(params: ModelParams, p):
    return float(sigma_zt(params, p[0], p[1]))
