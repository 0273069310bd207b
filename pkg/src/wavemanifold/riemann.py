"""Riemann solver: match a slow wave curve from the left state with a fast
wave curve from the right state through a common middle state."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, root

from .core_model import ModelParams, State, is_strictly_hyperbolic, discriminant
from .errors import EllipticState, NoIntersection
from .hugoniot import hugoniot_prime_at, hugoniot_prime_coeffs
from .manifold import ManifoldPoint, Z_MAX, left_state, raise_state, reflect, right_state, \
    sigma, states
from .wave_curves import WaveCurve, build_fast_wave_curve, build_slow_wave_curve, wave_group_at


# --- intermediate surface ----------------------------------------------------

@dataclass
class IntermediateSurface:
    curve: WaveCurve
    s: np.ndarray
    z: np.ndarray
    points: np.ndarray  # (len(s), len(z), 3)
    generators: list

    def right_states(self):
        _, _, u, v = states(self.curve.params, self.points[..., 0], self.points[..., 1],
                            self.points[..., 2])
        return np.stack([u, v], axis=-1)


def build_intermediate_surface(params: ModelParams, curve: WaveCurve, z_range=(-3.0, 3.0),
                               resolution=(100, 100)) -> IntermediateSurface:
    ns, nz = resolution
    lo, hi = curve.s_range
    ss = np.linspace(lo, hi, ns)
    zs = np.linspace(z_range[0], z_range[1], nz)
    gens = [curve.point(s) for s in ss]
    pts = np.empty((ns, nz, 3))
    for i, g in enumerate(gens):
        hp = hugoniot_prime_coeffs(params, g)
        pts[i] = [hugoniot_prime_at(hp, z) for z in zs]
    return IntermediateSurface(curve, ss, zs, pts, gens)


# --- matching ------------------------------------------------------------------

def _right_states(params, pts):
    _, _, u, v = states(params, pts[:, 0], pts[:, 1], pts[:, 2])
    return np.column_stack([u, v])


def _left_states(params, pts):
    u, v, _, _ = states(params, pts[:, 0], pts[:, 1], pts[:, 2])
    return np.column_stack([u, v])


def _segment_hits(P, Q):
    """Intersections between the polylines P (n, 2) and Q (m, 2).

    Returns (i, a, j, b) with P[i] + a (P[i+1]-P[i]) = Q[j] + b (Q[j+1]-Q[j]).
    """
    out = []
    p0, p1 = P[:-1], P[1:]
    q0, q1 = Q[:-1], Q[1:]
    dp = p1 - p0
    dq = q1 - q0
    # bounding-box prefilter, chunked over P
    qmin = np.minimum(q0, q1)
    qmax = np.maximum(q0, q1)
    for i in range(len(p0)):
        pmin = np.minimum(p0[i], p1[i])
        pmax = np.maximum(p0[i], p1[i])
        cand = np.nonzero(np.all(qmax >= pmin - 1e-12, axis=1) & np.all(qmin <= pmax + 1e-12, axis=1))[0]
        if not len(cand):
            continue
        r = q0[cand] - p0[i]
        den = dp[i, 0] * dq[cand, 1] - dp[i, 1] * dq[cand, 0]
        ok = np.abs(den) > 1e-300
        with np.errstate(divide="ignore", invalid="ignore"):
            a = (r[:, 0] * dq[cand, 1] - r[:, 1] * dq[cand, 0]) / den
            b = (r[:, 0] * dp[i, 1] - r[:, 1] * dp[i, 0]) / den
        hit = ok & (a >= -1e-9) & (a <= 1 + 1e-9) & (b >= -1e-9) & (b <= 1 + 1e-9)
        for k in np.nonzero(hit)[0]:
            out.append((i, float(a[k]), int(cand[k]), float(b[k])))
    return out


@dataclass
class Match:
    s: float
    t: float
    U_Ms: ManifoldPoint
    fast_point: ManifoldPoint
    U_Mf: ManifoldPoint  # reflection of the fast-curve point
    W_M: tuple
    slow_kind: str
    fast_kind: str
    residual: float
    geometric_residual: float
    slow_group: list = field(default_factory=list)
    fast_group: list = field(default_factory=list)
    ordered: bool = True

    def to_dict(self):
        return {
            "s": self.s, "t": self.t, "U_Ms": list(self.U_Ms), "U_Mf": list(self.U_Mf),
            "W_M": list(self.W_M), "slow_kind": self.slow_kind, "fast_kind": self.fast_kind,
            "residual": self.residual, "geometric_residual": self.geometric_residual,
            "speeds_ordered": self.ordered,
            "waves": [w.to_dict() for w in self.slow_group + self.fast_group],
        }


def _arc_offsets(curve):
    # global parameter of arc k at local u: backward shock -> -u, others -> k - 1 + u
    return [(-1.0, 0.0)] + [(1.0, float(k)) for k in range(len(curve.arcs) - 1)]


def _to_global(curve, k, u):
    sgn, off = _arc_offsets(curve)[k]
    return sgn * u if k == 0 else off + u


def _refine(params, arc_s, arc_f, u0, v0):
    def F(x):
        ps = arc_s.at(x[0])
        pf = arc_f.at(x[1])
        return np.array(right_state(params, ps)) - np.array(left_state(params, pf))
    best = (u0, v0)
    res = np.linalg.norm(F(best))
    for method in ("hybr", "lm"):
        try:
            sol = root(F, [u0, v0], method=method, options={"xtol": 1e-15} if method == "hybr" else {"xtol": 1e-15, "ftol": 1e-15})
        except Exception:
            continue
        x = np.clip(sol.x, 0.0, 1.0)
        r = np.linalg.norm(F(x))
        if r < res:
            best, res = (float(x[0]), float(x[1])), r
        if res <= 1e-12:
            break
    return best, float(res)


def match_middle(params: ModelParams, slow_curve: WaveCurve, fast_curve: WaveCurve, tol=1e-9):
    matches = []
    for i, a_s in enumerate(slow_curve.arcs):
        R = _right_states(params, a_s.points)
        for j, a_f in enumerate(fast_curve.arcs):
            L = _left_states(params, a_f.points)
            for (k, a, l, b) in _segment_hits(R, L):
                u0 = a_s.u[k] + a * (a_s.u[min(k + 1, len(a_s.u) - 1)] - a_s.u[k])
                v0 = a_f.u[l] + b * (a_f.u[min(l + 1, len(a_f.u) - 1)] - a_f.u[l])
                (u, v), res = _refine(params, a_s, a_f, u0, v0)
                if res > tol:
                    continue
                s = _to_global(slow_curve, i, u)
                t = _to_global(fast_curve, j, v)
                ps = a_s.at(u)
                pf = a_f.at(v)
                wm = tuple(map(float, right_state(params, ps)))
                if any(np.hypot(wm[0] - m.W_M[0], wm[1] - m.W_M[1]) < 1e-7 for m in matches):
                    continue
                hp = hugoniot_prime_coeffs(params, ps)
                q = hugoniot_prime_at(hp, pf.z)
                geo = float(np.linalg.norm(np.array(q) - np.array(reflect(pf))))
                matches.append(Match(s, t, ps, pf, reflect(pf), wm, a_s.kind, a_f.kind, res, geo))
    if not matches:
        raise NoIntersection("the reflected fast wave curve misses the intermediate surface")
    for m in matches:
        m.slow_group = wave_group_at(slow_curve, m.s)
        m.fast_group = wave_group_at(fast_curve, m.t)
        hi = max([w.speed_hi for w in m.slow_group], default=-np.inf)
        lo = min([w.speed_lo for w in m.fast_group], default=np.inf)
        m.ordered = bool(hi <= lo + 1e-12)
    return matches


# --- solution ----------------------------------------------------------------

@dataclass
class RiemannSolution:
    params: ModelParams
    W_L: tuple
    W_R: tuple
    U_L: ManifoldPoint | None
    U_R: ManifoldPoint | None
    matches: list
    primary: int
    slow_curve: WaveCurve | None = field(default=None, repr=False)
    fast_curve: WaveCurve | None = field(default=None, repr=False)
    notes: list = field(default_factory=list)

    @property
    def match(self) -> Match | None:
        return self.matches[self.primary] if self.matches else None

    @property
    def waves(self):
        m = self.match
        return [] if m is None else m.slow_group + m.fast_group

    @property
    def W_M(self):
        return self.W_L if self.match is None else self.match.W_M

    def speeds(self):
        out = []
        for w in self.waves:
            out += [w.speed_lo, w.speed_hi]
        return out

    def to_dict(self):
        return {
            "params": self.params.to_dict(), "W_L": list(self.W_L), "W_R": list(self.W_R),
            "U_L": None if self.U_L is None else list(self.U_L),
            "U_R": None if self.U_R is None else list(self.U_R),
            "slow_structure": None if self.slow_curve is None else self.slow_curve.structure,
            "fast_structure": None if self.fast_curve is None else self.fast_curve.structure,
            "primary": self.primary, "matches": [m.to_dict() for m in self.matches],
            "notes": self.notes,
        }


def solve(params: ModelParams, w_left, w_right, z_max=Z_MAX) -> RiemannSolution:
    w_left = tuple(map(float, w_left))
    w_right = tuple(map(float, w_right))
    for w in (w_left, w_right):
        if not is_strictly_hyperbolic(params, w):
            raise EllipticState(f"state {w} is not strictly hyperbolic "
                                f"(delta={discriminant(params, *w):.3e})")
    if np.allclose(w_left, w_right, rtol=0, atol=1e-14):
        return RiemannSolution(params, w_left, w_right, None, None, [], 0, notes=["trivial"])
    UL = raise_state(params, w_left, "slow")
    UR = raise_state(params, w_right, "fast")
    slow = build_slow_wave_curve(params, UL, z_max)
    fast = build_fast_wave_curve(params, UR, z_max)
    matches = match_middle(params, slow, fast)
    ordered = [k for k, m in enumerate(matches) if m.ordered]
    pool = ordered if ordered else list(range(len(matches)))
    primary = min(pool, key=lambda k: np.hypot(*matches[k].W_M))
    notes = []
    if len(matches) > 1:
        notes.append(f"{len(matches)} middle states found")
    if not ordered:
        notes.append("no match has slow speeds below fast speeds")
    notes += [f"{c.family} curve truncated at z_max on {r}" for c in (slow, fast) for r in c.truncated]
    return RiemannSolution(params, w_left, w_right, UL, UR, matches, primary, slow, fast, notes)


def _fan_state(params, fan, xi):
    arc = fan.fan_arc
    zs = arc.param
    f = lambda z: sigma(params, arc.at(z)) - xi
    a, b = zs[0], zs[-1]
    fa, fb = f(a), f(b)
    if fa == 0:
        z = a
    elif fb == 0:
        z = b
    else:
        z = brentq(f, a, b, xtol=1e-14, rtol=1e-14)
    return tuple(map(float, left_state(params, arc.at(z))))


def evaluate_profile(solution: RiemannSolution, xi) -> tuple:
    params = solution.params
    for w in solution.waves:
        if xi <= w.speed_lo:
            return w.left
        if w.kind == "fan" and xi <= w.speed_hi:
            return _fan_state(params, w, xi)
    return solution.W_R


def profile_table(solution: RiemannSolution, xis):
    return np.array([evaluate_profile(solution, x) for x in xis])
