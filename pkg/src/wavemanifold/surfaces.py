"""Distinguished surfaces and curves of the wave manifold, and region labels."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core_model import ModelParams, discriminant
from .errors import EmptyRange, NotInCs, OnBoundary, ZAxisSingular
from .manifold import ManifoldPoint, states

BOUNDARY_TOL = 1e-9


# --- sonic surfaces -------------------------------------------------------

def son_value(params: ModelParams, z, tau, y):
    b1, c = params.b1, params.c
    z2 = z * z
    return (c * z * ((b1 + 1) * z2 + 3) * tau + 0.5 * ((b1 + 1) * z2 - 1) * y
            + c * ((b1 - 1) * z2 + 1) / (z2 + 1))


def son_residuals(params: ModelParams, p):
    z, tau, y = p
    return float(son_value(params, z, tau, y)), float(son_value(params, z, tau, -y))


def inflection_tau(params: ModelParams, z):
    z = np.asarray(z, dtype=float)
    if np.any(z == 0):
        raise ZAxisSingular("inflection locus is undefined at z = 0")
    b1 = params.b1
    z2 = z * z
    out = -((b1 - 1) * z2 + 1) / (z * (z2 + 1) * ((b1 + 1) * z2 + 3))
    return out if out.ndim else float(out)


def inflection_numerator(params: ModelParams, z, tau):
    """Positive multiple of dsigma/dz on C; vanishes exactly on the inflection locus."""
    b1 = params.b1
    z2 = z * z
    return z * ((b1 + 1) * z2 + 3) * (z2 + 1) * tau + (b1 - 1) * z2 + 1


def double_sonic(params: ModelParams):
    """The two lines of the double sonic locus as (z, tau) pairs; Y is free."""
    zc = params.z_crit
    return [(zc, inflection_tau(params, zc)), (-zc, inflection_tau(params, -zc))]


def between_inflection_branches(params: ModelParams, z, tau):
    return inflection_numerator(params, z, tau) > 0


# --- SCC and ECC' ---------------------------------------------------------

def scc_point(params: ModelParams, z0, z) -> ManifoldPoint:
    """Point of the Hugoniot curve of the coincidence point (z0, 0, 0)."""
    b1, c = params.b1, params.c
    d = z - z0
    tau = d * (b1 * z * z + b1 * z * z0 - 2 * z * z0 + 2) / (
        (z * z + 1) * (z0 * z0 + 1) * ((b1 - 1) * z * z + 1))
    y = -2 * c * d * d / ((z0 * z0 + 1) * ((b1 - 1) * z * z + 1))
    return ManifoldPoint(float(z), float(tau), float(y))


def scc_arrays(params: ModelParams, z0, z):
    b1, c = params.b1, params.c
    z0 = np.asarray(z0, dtype=float)
    z = np.asarray(z, dtype=float)
    d = z - z0
    tau = d * (b1 * z * z + b1 * z * z0 - 2 * z * z0 + 2) / (
        (z * z + 1) * (z0 * z0 + 1) * ((b1 - 1) * z * z + 1))
    y = -2 * c * d * d / ((z0 * z0 + 1) * ((b1 - 1) * z * z + 1))
    return z + 0 * z0, tau, y


def ecc_prime_z0(params: ModelParams, z):
    return ((params.b1 + 1) * z * z + 1) / (2 * z)


def _ecc_den(params, z):
    tp = params.b1 + 1
    return tp * tp * z ** 4 + 2 * (params.b1 + 3) * z * z + 1


def ecc_prime_point(params: ModelParams, z) -> ManifoldPoint:
    b1, c = params.b1, params.c
    q = (b1 - 1) * z * z + 1
    den = _ecc_den(params, z)
    tau = -(b1 + 2) * z * q / ((z * z + 1) * den)
    y = -2 * c * q / den
    return ManifoldPoint(float(z), float(tau), float(y))


def scc_residual(params: ModelParams, p):
    """Discriminant at the left state: negative strictly inside SCC, zero on it."""
    u, v, _, _ = states(params, p[0], p[1], p[2])
    return float(discriminant(params, u, v))


def scc_prime_residual(params: ModelParams, p):
    _, _, u, v = states(params, p[0], p[1], p[2])
    return float(discriminant(params, u, v))


def inside_scc(params: ModelParams, p) -> bool:
    return scc_residual(params, p) < 0


def inside_scc_prime(params: ModelParams, p) -> bool:
    return scc_prime_residual(params, p) < 0


# --- region decomposition --------------------------------------------------

@dataclass(frozen=True)
class RegionLabel:
    region: int
    sub: str  # "", "s" or "f"
    inside_SCC: bool
    inside_SCCprime: bool
    lax_slow: bool
    lax_fast: bool

    @property
    def name(self):
        return f"{self.region}{self.sub}"

    def __str__(self):
        flags = [f for f in ("lax_slow", "lax_fast") if getattr(self, f)]
        if self.inside_SCC:
            flags.append("inside_SCC")
        if self.inside_SCCprime:
            flags.append("inside_SCCprime")
        return f"region {self.name}" + (", " + ", ".join(flags) if flags else "")


# mirror image under Y -> -Y
_MIRROR = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5, 7: 8, 8: 7, 9: 12, 12: 9, 10: 11, 11: 10}


def _upper_region(params: ModelParams, z, s_son, s_sonp):
    """Region id for a point with Y > 0, from the signs of son and son'."""
    zc = params.z_crit
    if s_son > 0 and s_sonp > 0:
        return 10
    if s_son < 0 and s_sonp < 0:
        return 8 if z > 0 else 5
    if z > zc:
        return 1
    if z < -zc:
        return 4
    return 9


def _beyond_ellipse(params: ModelParams, p, ellipse_res):
    """True when the segment from the slice apex (tau_infl, 0) to p meets
    the interior of the slice ellipse {ellipse_res < 0}."""
    z, tau, y = p
    apex = inflection_tau(params, z)
    # states are affine along the segment, so the residual is a quadratic in t
    f0, fh, f1 = (ellipse_res((z, apex + t * (tau - apex), t * y)) for t in (0.0, 0.5, 1.0))
    a = 2 * (f0 - 2 * fh + f1)
    b = f1 - f0 - a
    if f1 < 0 or f0 < 0:
        return True
    if a > 0:
        tm = -b / (2 * a)
        return bool(0 < tm < 1 and f0 + b * tm + a * tm * tm < 0)
    return False


def _touches_cs(params: ModelParams, p, ellipse_res):
    """Outside the ellipse, the sector splits into the piece next to the apex
    and the piece beyond the ellipse; the apex side meets C_s iff z > 0."""
    beyond = _beyond_ellipse(params, p, ellipse_res)
    return beyond != (p[0] > 0)


def region_classify(params: ModelParams, p, tol=BOUNDARY_TOL) -> RegionLabel:
    z, tau, y = (float(x) for x in p)
    s1, s2 = son_residuals(params, (z, tau, y))
    scale = 1.0 + abs(tau) + abs(y)
    if abs(y) <= tol or abs(s1) <= tol * scale or abs(s2) <= tol * scale or z == 0:
        raise OnBoundary(f"point {p} lies on C, Son, Son' or z = 0")
    if y > 0:
        reg = _upper_region(params, z, np.sign(s1), np.sign(s2))
    else:
        reg = _MIRROR[_upper_region(params, z, np.sign(s2), np.sign(s1))]
    in_scc = scc_residual(params, (z, tau, y)) < 0
    in_sccp = scc_prime_residual(params, (z, tau, y)) < 0
    sub = ""
    if reg == 11:
        # the SCC slice cuts region 11; the piece meeting C_s is 11s
        res = lambda q: scc_residual(params, q)
        sub = "s" if (not in_scc and _touches_cs(params, (z, tau, y), res)) else "f"
    elif reg == 10:
        res = lambda q: scc_prime_residual(params, q)
        sub = "f" if (not in_sccp and not _touches_cs(params, (z, tau, y), res)) else "s"
    lax_slow = reg == 8 or (reg == 11 and sub == "s")
    lax_fast = reg == 6 or (reg == 10 and sub == "f")
    return RegionLabel(reg, sub, in_scc, in_sccp, lax_slow, lax_fast)


# --- subdivision of C_s -----------------------------------------------------

@lru_cache(maxsize=8)
def _rcrit_interp(params: ModelParams, z_max=50.0):
    from scipy.integrate import solve_ivp
    from .foliations import rarefaction_rhs

    zc = params.z_crit
    t1 = inflection_tau(params, zc)
    sol = solve_ivp(lambda z, t: [rarefaction_rhs(params, z, t[0])], (zc, -z_max), [t1],
                    method="RK45", rtol=1e-10, atol=1e-12, dense_output=True)
    return sol.sol


def rcrit_tau(params: ModelParams, z):
    """tau on the separatrix rarefaction curve through the double sonic point of C_s."""
    return float(_rcrit_interp(params)(z)[0])


def cs_region(params: ModelParams, z, tau) -> str:
    if not tau < 0:
        raise NotInCs(f"tau = {tau} is not negative")
    zc = params.z_crit
    if z > 0 and tau < inflection_tau(params, z):
        return "III"
    if z > zc:
        return "I"
    if tau > rcrit_tau(params, z):
        return "I"
    return "II"


# --- mesh export -------------------------------------------------------------

@dataclass
class Mesh:
    vertices: np.ndarray
    triangles: np.ndarray

    def to_obj(self, header="") -> str:
        lines = [f"# {header}"] if header else []
        lines += ["v %.12g %.12g %.12g" % tuple(v) for v in self.vertices]
        lines += ["f %d %d %d" % tuple(t + 1) for t in self.triangles]
        return "\n".join(lines) + "\n"

    def to_csv(self, header="") -> str:
        lines = [f"# {header}"] if header else []
        lines.append("z,tau,Y")
        lines += ["%.12g,%.12g,%.12g" % tuple(v) for v in self.vertices]
        return "\n".join(lines) + "\n"


def _grid_mesh(X, Y, Z):
    n, m = X.shape
    verts = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    ok = np.all(np.isfinite(verts), axis=1)
    idx = np.arange(n * m).reshape(n, m)
    a, b = idx[:-1, :-1].ravel(), idx[1:, :-1].ravel()
    c, d = idx[:-1, 1:].ravel(), idx[1:, 1:].ravel()
    tris = np.vstack([np.column_stack([a, b, d]), np.column_stack([a, d, c])])
    tris = tris[np.all(ok[tris], axis=1)]
    return Mesh(verts, tris)


def _split_z(lo, hi, n, gap=1e-3):
    """Sample [lo, hi] avoiding a neighbourhood of z = 0."""
    if lo < 0 < hi:
        k = max(2, n // 2)
        return np.concatenate([np.linspace(lo, -gap, k), np.linspace(gap, hi, k)])
    return np.linspace(lo, hi, n)


def export_surface_mesh(params: ModelParams, surface: str, ranges, resolution=60) -> Mesh:
    """Triangulated samples of a surface inside the box ranges = ((zlo, zhi), (tlo, thi), (ylo, yhi))."""
    (zlo, zhi), (tlo, thi), (ylo, yhi) = ranges
    if not (zlo < zhi and tlo < thi and ylo <= yhi):
        raise EmptyRange(f"empty box {ranges}")
    n = int(resolution)
    key = surface.lower().replace("'", "prime").replace("-", "_")
    if key == "c":
        Zg, Tg = np.meshgrid(np.linspace(zlo, zhi, n), np.linspace(tlo, thi, n), indexing="ij")
        mesh = _grid_mesh(Zg, Tg, np.zeros_like(Zg))
    elif key in ("son", "sonprime"):
        sgn = 1.0 if key == "son" else -1.0
        zs = _split_z(zlo, zhi, n)
        ys = np.linspace(ylo, yhi, n)
        Zg, Yg = np.meshgrid(zs, ys, indexing="ij")
        b1, c = params.b1, params.c
        z2 = Zg * Zg
        Tg = -(sgn * 0.5 * ((b1 + 1) * z2 - 1) * Yg + c * ((b1 - 1) * z2 + 1) / (z2 + 1)) / (
            c * Zg * ((b1 + 1) * z2 + 3))
        mesh = _grid_mesh(Zg, Tg, Yg)
    elif key == "scc":
        z0s = np.linspace(zlo, zhi, n)
        zs = np.linspace(zlo, zhi, n)
        Z0, Zg = np.meshgrid(z0s, zs, indexing="ij")
        z, t, y = scc_arrays(params, Z0, Zg)
        mesh = _grid_mesh(z, t, y)
    else:
        raise ValueError(f"unknown surface {surface!r}")
    v = mesh.vertices
    inside = ((v[:, 0] >= zlo) & (v[:, 0] <= zhi) & (v[:, 1] >= tlo) & (v[:, 1] <= thi)
              & (v[:, 2] >= ylo) & (v[:, 2] <= yhi))
    tris = mesh.triangles[np.all(inside[mesh.triangles], axis=1)]
    if len(tris) == 0:
        raise EmptyRange(f"surface {surface} has no samples in {ranges}")
    used = np.unique(tris)
    remap = -np.ones(len(v), dtype=int)
    remap[used] = np.arange(len(used))
    return Mesh(v[used], remap[tris])


def curve_samples(params: ModelParams, curve: str, z_range=(-3.0, 3.0), n=400):
    """Sampled distinguished curves: inflection, ECCprime, double-sonic, coincidence."""
    key = curve.lower().replace("'", "prime").replace("-", "_")
    zs = _split_z(z_range[0], z_range[1], n)
    if key == "inflection":
        return np.column_stack([zs, inflection_tau(params, zs), np.zeros_like(zs)])
    if key == "eccprime":
        return np.array([ecc_prime_point(params, z) for z in zs])
    if key == "coincidence":
        zs = np.linspace(z_range[0], z_range[1], n)
        return np.column_stack([zs, np.zeros_like(zs), np.zeros_like(zs)])
    if key == "double_sonic":
        ys = np.linspace(-3, 3, n // 2)
        out = []
        for zc, tc in double_sonic(params):
            out.append(np.column_stack([np.full_like(ys, zc), np.full_like(ys, tc), ys]))
        return np.vstack(out)
    raise ValueError(f"unknown curve {curve!r}")


def lax_conditions(params: ModelParams, p):
    """Brute-force shock inequalities (slow_ok, fast_ok) from the C-intersections
    of the Hugoniot curves through p and its reflection."""
    from .hugoniot import hugoniot_coeffs, intersections_with_C
    from .manifold import sigma_zt

    def speeds(q):
        pts = intersections_with_C(hugoniot_coeffs(params, q))
        if len(pts) != 2 or not (pts[0].tau < 0 < pts[1].tau):
            return None
        return float(sigma_zt(params, pts[0].z, pts[0].tau)), float(sigma_zt(params, pts[1].z, pts[1].tau))

    left = speeds(p)
    right = speeds((p[0], p[1], -p[2]))
    if left is None or right is None:
        return False, False
    s = float(sigma_zt(params, p[0], p[1]))
    slow_ok = s < left[0] and right[0] < s < right[1]
    fast_ok = s > right[1] and left[0] < s < left[1]
    return slow_ok, fast_ok
