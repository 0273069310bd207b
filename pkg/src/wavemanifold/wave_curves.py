"""Slow and fast wave curves built from shock, rarefaction and composite arcs."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core_model import ModelParams
from .errors import BasePointOnBoundary, OutOfRange
from .foliations import OdeArc, integrate_composite, integrate_rarefaction
from .hugoniot import hugoniot_coeffs, hugoniot_at, sigma_along_hugoniot
from .manifold import ManifoldPoint, Z_MAX, left_state, reflect, right_state, sigma, sigma_zt, states
from .surfaces import BOUNDARY_TOL, inflection_numerator

N_SAMPLES = 400


@dataclass
class WaveArc:
    kind: str  # shock | rarefaction | composite
    family: str  # slow | fast
    sigma_direction: int  # +1 increasing, -1 decreasing, from start to end
    u: np.ndarray
    points: np.ndarray
    sigma: np.ndarray
    start_reason: str
    end_reason: str
    evaluator: Callable[[float], ManifoldPoint] = field(repr=False)
    source: OdeArc | None = field(default=None, repr=False)
    role: str = ""  # backward_shock | rarefaction | composite | trailing_shock

    def at(self, u) -> ManifoldPoint:
        return self.evaluator(float(np.clip(u, 0.0, 1.0)))

    @property
    def start(self):
        return ManifoldPoint(*self.points[0])

    @property
    def end(self):
        return ManifoldPoint(*self.points[-1])

    def to_dict(self):
        return {
            "kind": self.kind, "family": self.family, "role": self.role,
            "sigma_direction": self.sigma_direction,
            "start_reason": self.start_reason, "end_reason": self.end_reason,
            "samples": [[float("%.12g" % x) for x in (u, *p, s)]
                        for u, p, s in zip(self.u, self.points, self.sigma)],
        }


def _sigma_table(param, sig):
    """Map u in [0, 1] to the arc parameter so samples are even in sigma."""
    frac = np.abs(sig - sig[0])
    if frac[-1] == 0:
        frac = np.linspace(0.0, 1.0, len(sig))
    else:
        frac = frac / frac[-1]
        frac = np.maximum.accumulate(frac)
    return frac, param


def _resample(evaluator_param, param, sig, n=N_SAMPLES):
    frac, par = _sigma_table(param, sig)
    keep = np.concatenate([[True], np.diff(frac) > 0])
    frac, par = frac[keep], par[keep]
    if len(frac) < 2:
        def ev(u):
            return evaluator_param(par[0])
        us = np.zeros(1)
        return ev, us

    def ev(u):
        return evaluator_param(float(np.interp(u, frac, par)))
    return ev, np.linspace(0.0, 1.0, n)


# --- shock arcs -------------------------------------------------------------

def _sigma_critical_points(h):
    """Real zeros of d sigma/dz along the Hugoniot curve with coefficients h."""
    b1, c = h.params.b1, h.params.c
    z0, t0, y0, th = h.z0, h.tau0, h.y0, h.vartheta0
    tp = b1 + 1
    sp3 = b1 * tp * (y0 * th + 2 * c * (1 + z0 * t0 * th))
    sp2 = tp * (b1 * z0 * y0 * th + 2 * c * (2 * z0 + t0 * z0 ** 4 - t0))
    sp1 = b1 * (y0 * th + 2 * c * (z0 * t0 * th - 2 * z0 * z0 - 1))
    sp0 = b1 * z0 * y0 * th + 2 * c * (2 * z0 + t0 * z0 ** 4 - t0)
    num = np.poly1d([sp3, -sp2, -sp1, sp0])
    den = np.poly1d([b1 - 1, 0.0, 1.0])
    d = num.deriv() * den - num * den.deriv()
    roots = np.roots(d.coeffs) if d.order > 0 else np.array([])
    return np.sort(roots[np.abs(roots.imag) < 1e-10].real)


def shock_arc(params: ModelParams, base, z_start, family, role, z_max=Z_MAX, n=N_SAMPLES):
    """Arc of H(base) (slow) or H'(base) (fast) from z_start, following
    decreasing (slow) or increasing (fast) sigma up to the first critical
    point of sigma or |z| = z_max."""
    h = hugoniot_coeffs(params, base)
    mirror = family == "fast"
    eps = 1e-7 * max(1.0, abs(z_start))
    ds = sigma_along_hugoniot(h, z_start + eps) - sigma_along_hugoniot(h, z_start - eps)
    want = -1.0 if family == "slow" else 1.0
    d = want * np.sign(ds)
    crit = _sigma_critical_points(h)
    ahead = crit[(crit - z_start) * d > 1e-9]
    if len(ahead):
        z_end = ahead[np.argmin(np.abs(ahead - z_start))]
        reason = "hit_son_f"
        if abs(z_end) > z_max:
            z_end, reason = d * z_max, "truncated_at_zmax"
    else:
        z_end, reason = d * z_max, "truncated_at_zmax"

    def at_z(z):
        p = hugoniot_at(h, z)
        return reflect(p) if mirror else p

    # dense table in z, then resample evenly in sigma
    zz = np.concatenate([z_start + (z_end - z_start) * np.linspace(0, 1, 3000) ** 2,
                         np.linspace(z_start, z_end, 3000)])
    zz = np.unique(zz)
    if z_end < z_start:
        zz = zz[::-1]
    sig = sigma_along_hugoniot(h, zz)
    ev, us = _resample(at_z, zz, sig, n)
    pts = np.array([ev(u) for u in us])
    sg = sigma_zt(params, pts[:, 0], pts[:, 1])
    return WaveArc("shock", family, int(np.sign(sg[-1] - sg[0])), us, pts, sg,
                   "base" if role == "backward_shock" else "composite_end", reason, ev, None, role)


def rarefaction_wave_arc(params: ModelParams, base, family, z_max=Z_MAX, n=N_SAMPLES):
    arc = integrate_rarefaction(params, base, family, z_max=z_max, n_samples=2000)
    ev, us = _resample(lambda z: arc.at(z), arc.param, arc.sigma, n)
    if arc.reason == "hit_coincidence":
        z_end = arc.param[-1]
        base_ev = ev

        def ev(u):
            p = base_ev(u)
            return ManifoldPoint(p.z, 0.0, 0.0) if p.z == z_end else p
    pts = np.array([ev(u) for u in us])
    sg = sigma_zt(params, pts[:, 0], pts[:, 1])
    return WaveArc("rarefaction", family, int(np.sign(sg[-1] - sg[0])) if len(sg) > 1 else 0,
                   us, pts, sg, "base", arc.reason, ev, arc, "rarefaction")


def composite_wave_arc(params: ModelParams, rare: WaveArc, base, family, z_max=Z_MAX, n=N_SAMPLES):
    arc = integrate_composite(params, rare.end, family, base, z_max=z_max,
                              n_samples=2000, rarefaction=rare.source)
    ev, us = _resample(arc.evaluator, arc.param, arc.sigma, n)
    pts = np.array([ev(u) for u in us])
    pts[-1] = arc.points[-1]
    end_pt = ManifoldPoint(*arc.points[-1])
    base_ev = ev

    def ev(u):
        return end_pt if u >= 1.0 else base_ev(u)
    sg = sigma_zt(params, pts[:, 0], pts[:, 1])
    return WaveArc("composite", family, int(np.sign(sg[-1] - sg[0])), us, pts, sg,
                   "hit_inflection", arc.reason, ev, arc, "composite")


# --- wave curves ------------------------------------------------------------

@dataclass
class WaveCurve:
    params: ModelParams
    family: str
    base: ManifoldPoint
    arcs: list  # [backward_shock, rarefaction, composite?, trailing_shock?]
    structure: str
    truncated: list

    @property
    def s_range(self):
        return -1.0, float(len(self.arcs) - 1)

    def arc_of(self, s):
        lo, hi = self.s_range
        if not lo - 1e-12 <= s <= hi + 1e-12:
            raise OutOfRange(f"s={s} outside [{lo}, {hi}]")
        if s <= 0:
            return self.arcs[0], -s
        k = min(int(np.floor(s)), len(self.arcs) - 2)
        return self.arcs[k + 1], s - k

    def point(self, s) -> ManifoldPoint:
        if s == 0:
            return self.base
        arc, u = self.arc_of(s)
        return arc.at(u)

    def kinds(self):
        return [a.kind for a in self.arcs]

    def structure_string(self):
        up, down = "↗", "↘"
        f = "s" if self.family == "slow" else "f"
        sym = {"shock": "S", "rarefaction": "R", "composite": "Co"}
        parts = []
        for i, a in enumerate(self.arcs):
            # backward shock is written as the arc leading into the base
            arrow = up if (a.sigma_direction > 0) != (i == 0) else down
            parts.append(f"{sym[a.kind]}_{f}{arrow}")
            if i == 0:
                parts.append("U0")
        return " ".join(parts)

    def to_dict(self):
        return {
            "family": self.family, "base": list(map(float, self.base)),
            "structure": self.structure, "structure_string": self.structure_string(),
            "truncated": self.truncated, "arcs": [a.to_dict() for a in self.arcs],
        }

    def to_json(self, header=""):
        d = self.to_dict()
        if header:
            d = {"format": header, **d}
        return json.dumps(d, indent=1)


def _check_base(params, u0, family):
    z, tau, y = (float(x) for x in u0)
    if y != 0:
        raise BasePointOnBoundary("base point must lie on C (Y = 0)")
    if family == "slow" and not tau < 0 or family == "fast" and not tau > 0:
        raise BasePointOnBoundary(f"base tau={tau} not strictly inside C_{family[0]}")
    if abs(inflection_numerator(params, z, tau)) <= BOUNDARY_TOL * (1 + abs(tau)):
        raise BasePointOnBoundary("base point lies on the inflection locus")
    return ManifoldPoint(z, tau, 0.0)


def _build(params, u0, family, z_max):
    base = _check_base(params, u0, family)
    arcs = [shock_arc(params, base, base.z, family, "backward_shock", z_max)]
    rare = rarefaction_wave_arc(params, base, family, z_max)
    arcs.append(rare)
    structure = "Case1"
    if rare.end_reason == "hit_inflection":
        comp = composite_wave_arc(params, rare, base, family, z_max)
        arcs.append(comp)
        structure = "Case2_1"
        if comp.end_reason == "hit_hugoniot_of_origin":
            structure = "Case2_2"
            arcs.append(shock_arc(params, base, comp.end.z, family, "trailing_shock", z_max))
    truncated = [a.role for a in arcs if a.end_reason == "truncated_at_zmax"]
    return WaveCurve(params, family, base, arcs, structure, truncated)


def build_slow_wave_curve(params: ModelParams, u0, z_max=Z_MAX) -> WaveCurve:
    return _build(params, u0, "slow", z_max)


def build_fast_wave_curve(params: ModelParams, u0, z_max=Z_MAX) -> WaveCurve:
    return _build(params, u0, "fast", z_max)


# --- wave groups ------------------------------------------------------------

@dataclass
class ElementaryWave:
    kind: str  # fan | shock
    left: tuple
    right: tuple
    speed_lo: float
    speed_hi: float
    fan_arc: object = field(default=None, repr=False)  # OdeArc on C for fans

    def to_dict(self):
        return {"kind": self.kind, "left": list(self.left), "right": list(self.right),
                "speed_lo": self.speed_lo, "speed_hi": self.speed_hi}


def _state_of(params, p):
    return tuple(float(x) for x in left_state(params, p))


def wave_group_at(curve: WaveCurve, s) -> list:
    """Elementary waves (left to right) of the wave group at parameter s."""
    params = curve.params
    base = curve.base
    wb = _state_of(params, base)
    sb = sigma(params, base)
    if s == 0:
        return []
    arc, u = curve.arc_of(s)
    p = arc.at(u)
    sp = sigma(params, p)
    wl = tuple(map(float, left_state(params, p)))
    wr = tuple(map(float, right_state(params, p)))
    slow = curve.family == "slow"
    if arc.kind == "shock":
        return [ElementaryWave("shock", wb, wr, sp, sp)] if slow else \
            [ElementaryWave("shock", wl, wb, sp, sp)]
    if arc.kind == "rarefaction":
        ws = _state_of(params, p)
        src = arc.source
        if slow:
            return [ElementaryWave("fan", wb, ws, sb, sp, src)]
        return [ElementaryWave("fan", ws, wb, sp, sb, src)]
    # composite: the sonic shock shares its characteristic side with the fan
    src = arc.source.rarefaction
    if slow:
        return [ElementaryWave("fan", wb, wl, sb, sp, src), ElementaryWave("shock", wl, wr, sp, sp)]
    return [ElementaryWave("shock", wl, wr, sp, sp), ElementaryWave("fan", wr, wb, sp, sb, src)]
