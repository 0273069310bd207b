"""Rarefaction curves on C, the sonic map T, and composite curves on Son'."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .core_model import ModelParams
from .errors import DoubleSonicDegenerate, SingularPoint, StartOnBoundary, ZAxisSingular
from .hugoniot import hugoniot_coeffs, _tau_y
from .manifold import ManifoldPoint, Z_MAX, sigma_zt, states
from .surfaces import BOUNDARY_TOL, inflection_numerator, inflection_tau, son_value

RTOL = 1e-9
ATOL = 1e-11

REASONS = ("hit_coincidence", "hit_inflection", "hit_double_sonic", "hit_hugoniot_of_origin",
           "hit_son_f", "truncated_at_zmax", "step_failure")


@dataclass
class OdeArc:
    """Sampled arc with an exact evaluator on its parameter interval."""
    kind: str
    family: str
    param: np.ndarray
    points: np.ndarray  # (n, 3) rows of z, tau, Y
    sigma: np.ndarray
    reason: str
    evaluator: Callable[[float], ManifoldPoint] = field(repr=False)

    @property
    def start(self):
        return ManifoldPoint(*self.points[0])

    @property
    def end(self):
        return ManifoldPoint(*self.points[-1])

    @property
    def sigma_direction(self):
        if len(self.sigma) < 2:
            return 0
        return int(np.sign(self.sigma[-1] - self.sigma[0]))

    def at(self, s):
        return self.evaluator(s)

    def to_csv(self, params: ModelParams, header="") -> str:
        u, v, u2, v2 = states(params, self.points[:, 0], self.points[:, 1], self.points[:, 2])
        lines = [f"# {header}"] if header else []
        lines.append("param,z,tau,Y,sigma,u_left,v_left,u_right,v_right")
        for row in zip(self.param, self.points[:, 0], self.points[:, 1], self.points[:, 2],
                       self.sigma, u, v, u2, v2):
            lines.append(",".join("%.12g" % x for x in row))
        return "\n".join(lines) + "\n"


# --- rarefaction curves ------------------------------------------------------

def rarefaction_rhs(params: ModelParams, z, tau):
    b1 = params.b1
    return -(b1 - 2) * z / ((b1 - 1) * z * z + 1) * tau + 2 / (z * z + 1) ** 2


def dsigma_dz_on_C(params: ModelParams, z, tau):
    b1, c = params.b1, params.c
    return c * z * ((b1 + 1) * z * z + 3) / ((b1 - 1) * z * z + 1) * tau + c / (z * z + 1)


def _event(fn, terminal=True):
    fn.terminal = terminal
    return fn


def integrate_rarefaction(params: ModelParams, start, family="slow", z_max=Z_MAX, n_samples=400):
    z0, t0 = float(start[0]), float(start[1])
    if t0 == 0:
        raise StartOnBoundary("start lies on the coincidence curve")
    want = "slow" if t0 < 0 else "fast"
    if family != want:
        raise StartOnBoundary(f"start with tau={t0} is not in the {family} part of C")
    num = inflection_numerator(params, z0, t0)
    if abs(num) <= BOUNDARY_TOL * (1 + abs(t0)):
        if abs((params.b1 + 1) * z0 * z0 - 1) <= 1e-9:
            # tangency with the inflection locus: nothing to continue
            p = ManifoldPoint(z0, t0, 0.0)
            s0 = float(sigma_zt(params, z0, t0))
            return OdeArc("rarefaction", family, np.array([z0]), np.array([p]), np.array([s0]),
                          "hit_inflection", lambda s: ManifoldPoint(float(s), t0, 0.0))
        raise StartOnBoundary("start lies on the inflection locus")
    # sigma increases for slow, decreases for fast; sign(num) = sign(dsigma/dz)
    direction = np.sign(num) if family == "slow" else -np.sign(num)
    z_end = direction * z_max

    ev_coin = _event(lambda z, y: y[0])
    ev_infl = _event(lambda z, y: inflection_numerator(params, z, y[0]))
    sol = solve_ivp(lambda z, y: [rarefaction_rhs(params, z, y[0])], (z0, z_end), [t0],
                    method="RK45", rtol=RTOL, atol=ATOL, dense_output=True,
                    events=[ev_coin, ev_infl])
    if sol.status == -1:
        reason = "step_failure"
        z1 = sol.t[-1]
    elif sol.status == 1:
        if len(sol.t_events[0]):
            reason, z1 = "hit_coincidence", sol.t_events[0][0]
        else:
            reason, z1 = "hit_inflection", sol.t_events[1][0]
    else:
        reason, z1 = "truncated_at_zmax", z_end
    dense = sol.sol

    def ev(s):
        return ManifoldPoint(float(s), float(dense(s)[0]), 0.0)

    zs = np.linspace(z0, z1, n_samples)
    taus = dense(zs)[0]
    if reason == "hit_coincidence":
        taus[-1] = 0.0
    pts = np.column_stack([zs, taus, np.zeros_like(zs)])
    sig = sigma_zt(params, zs, taus)
    return OdeArc("rarefaction", family, zs, pts, sig, reason, ev)


# --- Son' and the sonic map -------------------------------------------------

def son_prime_tau(params: ModelParams, z, y):
    if np.any(np.asarray(z) == 0):
        raise ZAxisSingular("Son' is vertical over z = 0")
    b1, c = params.b1, params.c
    z2 = z * z
    return ((z2 + 1) * ((b1 + 1) * z2 - 1) * y - 2 * c * ((b1 - 1) * z2 + 1)) / (
        2 * c * z * (z2 + 1) * ((b1 + 1) * z2 + 3))


def sigma_son_prime(params: ModelParams, z, y):
    b1, c = params.b1, params.c
    z2 = z * z
    return (((b1 + 1) * z2 - 1) ** 2 * y + 6 * c * (b1 + 1) * z2 + 2 * c) / (
        2 * b1 * z * ((b1 + 1) * z2 + 3)) + params.sigma0


def _tc2_parts(params: ModelParams, z, y):
    b1, c = params.b1, params.c
    tp, tm = b1 + 1, b1 - 1
    z2 = z * z
    A = tp * tp * z2 * z2 + 2 * (b1 + 3) * z2 + 1
    B = 2 * c * (tm * z2 + 1)
    D = 4 * c * (tm * z2 + 1)
    E = 4 * c * c * (z2 + 1)
    return A, B, D, E


def sonic_map_T_arrays(params: ModelParams, z, y):
    b1, c = params.b1, params.c
    tp = b1 + 1
    z2 = z * z
    A, B, D, E = _tc2_parts(params, z, y)
    w = (tp * z2 + 1) * y + 2 * c
    zc = -2 * (y - c) * z / w
    tc = -(A * y + B) * w * w / (2 * c * z * (tp * z2 + 3) * (A * y * y + D * y + E))
    return zc, tc


def sonic_map_T(params: ModelParams, z0, y0) -> ManifoldPoint:
    if z0 == 0:
        raise ZAxisSingular("sonic map undefined at z = 0")
    w = ((params.b1 + 1) * z0 * z0 + 1) * y0 + 2 * params.c
    if abs(w) < 1e-12:
        raise DoubleSonicDegenerate("image of the sonic map is at z = infinity")
    zc, tc = sonic_map_T_arrays(params, z0, y0)
    return ManifoldPoint(float(zc), float(tc), 0.0)


def son_prime_discriminator(params: ModelParams, z, y):
    """z (A Y + B): positive on Son'_s, negative on Son'_f, zero on ECC'."""
    A, B, _, _ = _tc2_parts(params, z, y)
    return z * (A * y + B)


def classify_son_prime(params: ModelParams, z, y, tol=BOUNDARY_TOL) -> str:
    if z == 0:
        raise ZAxisSingular("Son' classification undefined at z = 0")
    A, B, _, _ = _tc2_parts(params, z, y)
    val = A * y + B
    if abs(val) <= tol * max(1.0, abs(A * y), abs(B)):
        return "boundary"
    return "slow" if z * val > 0 else "fast"


# --- composite curves --------------------------------------------------------

def composite_coeffs(params: ModelParams, z):
    b1, c = params.b1, params.c
    tp, tm = b1 + 1, b1 - 1
    z2 = z * z
    z4 = z2 * z2
    z6 = z4 * z2
    cross = (tp * z2 - 1) * (tm * z2 + 1)
    mu2 = tp ** 4 * z4 * z4 + 4 * (2 * b1 + 3) * tp ** 2 * z6 + 2 * tp * (13 * b1 + 1) * z4 - 12 * z2 - 3
    mu1 = -4 * c * (tp ** 2 * z6 + tp * (5 * b1 - 7) * z4 + 3 * z2 + 3)
    mu0 = 12 * c * c * cross
    nu1 = tp ** 3 * z6 + tp * (7 * b1 - 1) * z4 + (7 * b1 - 1) * z2 + 1
    nu0 = -2 * c * cross
    return mu2, mu1, mu0, nu1, nu0


def composite_field(params: ModelParams, z, y):
    """Unnormalised tangent (dz, dY) of the composite foliation on Son'."""
    mu2, mu1, mu0, nu1, nu0 = composite_coeffs(params, z)
    tp = params.b1 + 1
    return z * (tp * z * z + 3) * (nu1 * y + nu0), -((mu2 * y + mu1) * y + mu0)


def composite_rhs(params: ModelParams, z, y):
    if z == 0:
        raise SingularPoint("composite field is singular at z = 0")
    dz, dy = composite_field(params, z, y)
    if dz == 0:
        raise SingularPoint(f"composite field has a vertical or singular direction at z={z}, Y={y}")
    return dy / dz


def composite_rhs_pullback(params: ModelParams, z, y, h=1e-6):
    """Slope of the pullback of the rarefaction field through T, by finite differences."""
    def T(zz, yy):
        return np.array(sonic_map_T_arrays(params, zz, yy))
    Tz = (T(z + h, y) - T(z - h, y)) / (2 * h)
    Ty = (T(z, y + h) - T(z, y - h)) / (2 * h)
    zc, tc = T(z, y)
    r = rarefaction_rhs(params, zc, tc)
    return (r * Tz[0] - Tz[1]) / (Ty[1] - r * Ty[0])


def preimage_quadratic(params: ModelParams, zc, tc):
    """Quadratic whose roots are the z of the two Son' points over (zc, tc, 0).

    Along H(U_C) the speed equals sigma(U_C) at a cubic's roots; z = zc is
    one of them and is divided out.
    """
    b1, c = params.b1, params.c
    th = zc * zc + 1
    tp = b1 + 1
    sp3 = b1 * tp * 2 * c * (1 + zc * tc * th)
    sp2 = tp * 2 * c * (2 * zc + tc * zc ** 4 - tc)
    sp1 = b1 * 2 * c * (zc * tc * th - 2 * zc * zc - 1)
    sp0 = 2 * c * (2 * zc + tc * zc ** 4 - tc)
    s = float(sigma_zt(params, zc, tc)) - params.sigma0
    k = 2 * b1 * th * s
    cubic = np.array([sp3, -sp2 - k * (b1 - 1), -sp1, sp0 - k])
    q, _ = np.polydiv(cubic, np.array([1.0, -zc]))
    return q


def _branch_root(q, sgn):
    # written so the root stays finite when the leading coefficient crosses 0
    q0, q1, q2 = q
    disc = q1 * q1 - 4 * q0 * q2
    den = -q1 - sgn * np.sqrt(max(disc, 0.0))
    return 2 * q2 / den if den != 0 else np.inf


def _preimage_point(params, zc, tc, sgn):
    q = preimage_quadratic(params, zc, tc)
    z = _branch_root(q, sgn)
    h = hugoniot_coeffs(params, (zc, tc, 0.0))
    tau, y = _tau_y(h, z)
    return ManifoldPoint(float(z), float(tau), float(y))


def integrate_composite(params: ModelParams, start, family, origin, z_max=Z_MAX,
                        n_samples=400, rarefaction: OdeArc | None = None):
    """Composite arc starting at a point of the inflection locus.

    Its points are the Son' shocks whose left state lies on the rarefaction
    arc from origin to start; the arc runs back toward origin, so sigma
    decreases (slow) or increases (fast).  Fast composites live on Son and
    are the mirror images of the Son' points.
    """
    if rarefaction is None:
        rarefaction = integrate_rarefaction(params, origin, family, z_max=z_max)
    z2 = float(start[0])
    zo = float(origin[0])
    sgn_y = 1.0 if family == "slow" else -1.0
    tau_of = lambda zc: float(rarefaction.at(zc).tau)

    def disc(zc):
        q = preimage_quadratic(params, zc, tau_of(zc))
        return q[1] * q[1] - 4 * q[0] * q[2]

    # choose the root that leaves the start point
    q = preimage_quadratic(params, z2, tau_of(z2))
    sgn = min((1.0, -1.0), key=lambda s_: abs(_branch_root(q, s_) - z2))

    # scan back along the rarefaction for the fold (double sonic locus)
    zs = np.linspace(z2, zo, 2001)
    d = np.array([disc(z) for z in zs])
    zend, reason = zo, "hit_hugoniot_of_origin"
    bad = np.nonzero(d[1:] < 0)[0]
    if len(bad):
        k = bad[0] + 1
        from scipy.optimize import brentq
        zend = brentq(disc, zs[k - 1], zs[k], xtol=1e-15, rtol=1e-15)
        reason = "hit_double_sonic"

    def ev_u(u):
        zc = z2 + (zend - z2) * (1 - (1 - u) ** 2)
        p = _preimage_point(params, zc, tau_of(zc), sgn)
        return ManifoldPoint(p.z, p.tau, sgn_y * p.y)

    us = np.linspace(0.0, 1.0, n_samples)
    pts = np.array([ev_u(u) for u in us])
    pts[0] = (z2, float(start[1]), 0.0)
    if reason == "hit_double_sonic":
        # the two preimages merge here; use the exact double root
        q = preimage_quadratic(params, zend, tau_of(zend))
        zf = -q[1] / (2 * q[0])
        tau, y = _tau_y(hugoniot_coeffs(params, (zend, tau_of(zend), 0.0)), zf)
        pts[-1] = (zf, tau, sgn_y * y)
    far = np.nonzero(~np.isfinite(pts[:, 0]) | (np.abs(pts[:, 0]) > z_max))[0]
    if len(far):
        k = far[0]
        us, pts = us[:k], pts[:k]
        reason = "truncated_at_zmax"
    sig = sigma_zt(params, pts[:, 0], pts[:, 1])
    arc = OdeArc("composite", family, us, pts, sig, reason, ev_u)
    arc.rarefaction = rarefaction
    arc.t_image_z = lambda u: z2 + (zend - z2) * (1 - (1 - u) ** 2)
    return arc


def integrate_composite_ode(params: ModelParams, start, family, s_max=1.0, n_samples=200):
    """Integrate the composite slope field from a point of the inflection locus.

    Independent of the preimage construction; used to cross-check it away
    from the singular lines.  Orientation follows decreasing sigma for slow.
    """
    z2 = float(start[0])
    sgn_y = 1.0 if family == "slow" else -1.0
    want = -1.0 if family == "slow" else 1.0

    def field(s, q):
        dz, dy = composite_field(params, q[0], q[1])
        n = np.hypot(dz, dy)
        return [orient * dz / n, orient * dy / n]

    dz, dy = composite_field(params, z2, 0.0)
    n = np.hypot(dz, dy)
    eps = 1e-6
    zp, yp = z2 + eps * dz / n, eps * dy / n
    ds = sigma_son_prime(params, zp, yp) - sigma_son_prime(params, z2, 0.0)
    orient = 1.0 if ds * want > 0 else -1.0
    ev_z0 = _event(lambda s, q: q[0])
    sol = solve_ivp(field, (0.0, s_max), [z2, 0.0], method="RK45", rtol=RTOL, atol=ATOL,
                    dense_output=True, events=[ev_z0])
    ss = np.linspace(0.0, sol.t[-1], n_samples)
    zy = sol.sol(ss)
    taus = son_prime_tau(params, zy[0], zy[1])
    pts = np.column_stack([zy[0], taus, sgn_y * zy[1]])
    return pts


def hugoniot_y_residual(params: ModelParams, origin, p):
    """Y - Y_hug(origin)(z): zero where p lies over the Hugoniot curve of origin."""
    h = hugoniot_coeffs(params, origin)
    _, y = _tau_y(h, p[0])
    return float(p[2] - y)
