"""First-order finite-volume oracle (Rusanov flux) for Riemann data."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core_model import ModelParams, discriminant, eigen_trace, flux_array, is_strictly_hyperbolic
from .errors import EllipticCellEncountered, EllipticState, WaveLeftDomain


@dataclass
class GridSpec:
    domain: tuple = (-1.0, 1.0)
    n: int = 4000
    t_end: float | None = None
    cfl: float = 0.45

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("cfl must lie in (0, 1]")
        if self.n < 16:
            raise ValueError("need at least 16 cells")
        if not self.domain[1] > self.domain[0]:
            raise ValueError("empty domain")

    @property
    def dx(self):
        return (self.domain[1] - self.domain[0]) / self.n

    @property
    def centers(self):
        lo, hi = self.domain
        return lo + (np.arange(self.n) + 0.5) * self.dx


@dataclass
class Profile:
    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    t: float
    steps: int
    elliptic_cells: list = field(default_factory=list)
    boundary_flux: np.ndarray = field(default_factory=lambda: np.zeros(2))
    mass0: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def to_csv(self, path=None):
        lines = ["x,u,v"] + [f"{a:.12g},{b:.12g},{c:.12g}" for a, b, c in zip(self.x, self.u, self.v)]
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def mass(self, dx):
        return np.array([self.u.sum() * dx, self.v.sum() * dx])


def local_speed(params, u, v):
    tr = eigen_trace(params, u)
    d = discriminant(params, u, v)
    return 0.5 * np.abs(tr) + 0.5 * np.sqrt(np.abs(d))


def rusanov_flux(params, ul, vl, ur, vr):
    fl, gl = flux_array(params, ul, vl)
    fr, gr = flux_array(params, ur, vr)
    a = np.maximum(local_speed(params, ul, vl), local_speed(params, ur, vr))
    return 0.5 * (fl + fr) - 0.5 * a * (ur - ul), 0.5 * (gl + gr) - 0.5 * a * (vr - vl)


def default_end_time(params, w_left, w_right, grid: GridSpec, max_speed=None):
    if max_speed is None:
        max_speed = max(local_speed(params, *w_left), local_speed(params, *w_right))
    reach = 0.8 * min(abs(grid.domain[0]), abs(grid.domain[1]))
    return reach / max_speed


def simulate(params: ModelParams, w_left, w_right, grid: GridSpec | None = None,
             max_speed=None, strict_elliptic=False) -> Profile:
    """Evolve Riemann data with outflow boundaries up to grid.t_end.

    max_speed bounds the physical wave speeds and is used to check that the
    waves stay inside the domain; by default it is the largest characteristic
    speed of the two data states.
    """
    grid = grid or GridSpec()
    for w in (w_left, w_right):
        if not is_strictly_hyperbolic(params, w):
            raise EllipticState(f"state {tuple(w)} is not strictly hyperbolic")
    if max_speed is None:
        max_speed = max(local_speed(params, *w_left), local_speed(params, *w_right))
    T = grid.t_end if grid.t_end is not None else default_end_time(params, w_left, w_right, grid, max_speed)
    lo, hi = grid.domain
    if max_speed * T > min(-lo, hi) * (1 + 1e-12):
        raise WaveLeftDomain(f"waves travel {max_speed * T:.4g} beyond the half width")
    x = grid.centers
    dx = grid.dx
    u = np.where(x < 0, w_left[0], w_right[0]).astype(float)
    v = np.where(x < 0, w_left[1], w_right[1]).astype(float)
    mass0 = np.array([u.sum() * dx, v.sum() * dx])
    bflux = np.zeros(2)
    elliptic = set()
    t, steps = 0.0, 0
    while t < T:
        a = local_speed(params, u, v).max()
        dt = min(grid.cfl * dx / a, T - t)
        ue = np.concatenate([[u[0]], u, [u[-1]]])
        ve = np.concatenate([[v[0]], v, [v[-1]]])
        Fu, Fv = rusanov_flux(params, ue[:-1], ve[:-1], ue[1:], ve[1:])
        u = u - dt / dx * (Fu[1:] - Fu[:-1])
        v = v - dt / dx * (Fv[1:] - Fv[:-1])
        bflux += dt * np.array([Fu[0] - Fu[-1], Fv[0] - Fv[-1]])
        bad = np.nonzero(discriminant(params, u, v) < 0)[0]
        if len(bad):
            elliptic.update(int(k) for k in bad)
        t += dt
        steps += 1
    prof = Profile(x, u, v, T, steps, sorted(elliptic), bflux, mass0)
    if strict_elliptic and prof.elliptic_cells:
        raise EllipticCellEncountered(f"{len(prof.elliptic_cells)} cells entered the elliptic region",
                                      prof.elliptic_cells)
    return prof


def shock_position(profile: Profile, left, right, x_guess, half_width):
    """Location where the smeared jump crosses its mid value, near x_guess."""
    k = int(np.argmax(np.abs(np.subtract(right, left))))
    q = profile.u if k == 0 else profile.v
    mid = 0.5 * (left[k] + right[k])
    idx = np.nonzero(np.abs(profile.x - x_guess) <= half_width)[0]
    if len(idx) < 2:
        return None
    d = q[idx] - mid
    sgn = np.nonzero(np.sign(d[:-1]) != np.sign(d[1:]))[0]
    if not len(sgn):
        return None
    j = sgn[np.argmin(np.abs(profile.x[idx[sgn]] - x_guess))]
    x0, x1 = profile.x[idx[j]], profile.x[idx[j + 1]]
    return float(x0 + (x1 - x0) * d[j] / (d[j] - d[j + 1]))


def compare_profiles(solution, profile: Profile) -> dict:
    """L1(u) + L1(v) distance between the analytic and numeric profiles at time T."""
    from .riemann import profile_table

    xi = profile.x / profile.t
    ref = profile_table(solution, xi)
    dx = profile.x[1] - profile.x[0]
    eu = np.abs(profile.u - ref[:, 0]).sum() * dx
    ev = np.abs(profile.v - ref[:, 1]).sum() * dx
    speeds = solution.speeds()
    span = (max(speeds) - min(speeds)) * profile.t if speeds else 0.0
    jump = float(np.hypot(solution.W_R[0] - solution.W_L[0], solution.W_R[1] - solution.W_L[1]))
    waves = []
    for w in solution.waves:
        if w.kind != "shock":
            continue
        xs = w.speed_lo * profile.t
        xn = shock_position(profile, w.left, w.right, xs, max(20 * dx, 0.02 * span))
        if xn is not None:
            waves.append({"speed": w.speed_lo, "x_exact": xs, "x_numeric": xn, "cells_off": (xn - xs) / dx})
    return {"l1": float(eu + ev), "l1_u": float(eu), "l1_v": float(ev), "scale": jump * span,
            "relative": float((eu + ev) / (jump * span)) if jump * span > 0 else 0.0,
            "n": len(profile.x), "t": profile.t, "elliptic_cells": len(profile.elliptic_cells),
            "shocks": waves}


def solution_max_speed(solution):
    s = solution.speeds()
    return max(abs(x) for x in s) if s else 0.0


def validate(solution, n=4000, cfl=0.45, domain=(-1.0, 1.0)) -> dict:
    """Run the FV oracle on the solution's data and compare profiles."""
    params = solution.params
    smax = max(solution_max_speed(solution),
               local_speed(params, *solution.W_L), local_speed(params, *solution.W_R))
    grid = GridSpec(domain, n, None, cfl)
    grid.t_end = default_end_time(params, solution.W_L, solution.W_R, grid, smax)
    prof = simulate(params, solution.W_L, solution.W_R, grid, max_speed=smax)
    return compare_profiles(solution, prof) | {"profile": prof}
