"""Command-line front end: solve, export, classify."""
from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core_model import load_params
from .errors import EllipticState, NoIntersection, OnBoundary, WaveManifoldError
from .manifold import ManifoldPoint, Z_MAX, raise_state
from .surfaces import curve_samples, export_surface_mesh, lax_conditions, region_classify, \
    son_residuals, BOUNDARY_TOL

log = logging.getLogger("wavemanifold")

FORMAT = f"wavemanifold-{__version__}"
EXIT_NO_INTERSECTION = 2
EXIT_ELLIPTIC = 3


def fmt(x):
    return "%.12g" % x


def round12(obj):
    """Recursively round floats to 12 significant digits for stable output."""
    if isinstance(obj, dict):
        return {k: round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round12(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(fmt(x)) if np.isfinite(x) else str(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(round12({"format": FORMAT, **obj}), indent=1, ensure_ascii=False) + "\n"


def _pair(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected u,v, got {text!r}")
    return tuple(parts)


def _triple(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected z,tau,Y, got {text!r}")
    return tuple(parts)


def _range(text):
    lo, hi = (float(p) for p in text.split(","))
    return lo, hi


def _write(outdir: Path, name: str, text: str):
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(text)
    log.info("wrote %s", path)
    return path


# --- commands -----------------------------------------------------------------

def cmd_solve(args, params):
    from .fv_oracle import validate
    from .riemann import evaluate_profile, solve

    try:
        sol = solve(params, args.wl, args.wr, z_max=args.z_max)
    except EllipticState as e:
        print(f"elliptic state: {e}", file=sys.stderr)
        return EXIT_ELLIPTIC
    except NoIntersection as e:
        print(f"no intersection: {e}", file=sys.stderr)
        return EXIT_NO_INTERSECTION
    out = Path(args.out)
    _write(out, "solution.json", dump_json(sol.to_dict()))
    speeds = sol.speeds()
    span = max(1.0, max(abs(s) for s in speeds)) if speeds else 1.0
    xis = np.linspace(-1.25 * span, 1.25 * span, args.samples)
    if args.profile_at is not None:
        xs = xis * args.profile_at
        rows = [f"{fmt(x)},{fmt(w[0])},{fmt(w[1])}" for x, w in
                zip(xs, (evaluate_profile(sol, xi) for xi in xis))]
        head = f"# {FORMAT} profile t={fmt(args.profile_at)}\nx,u,v\n"
    else:
        rows = [f"{fmt(xi)},{fmt(w[0])},{fmt(w[1])}" for xi, w in
                zip(xis, (evaluate_profile(sol, xi) for xi in xis))]
        head = f"# {FORMAT} profile\nxi,u,v\n"
    _write(out, "profile.csv", head + "\n".join(rows) + "\n")
    m = sol.match
    if m is None:
        print("trivial solution, W_L = W_R")
    else:
        print(f"pattern: slow {m.slow_kind} + fast {m.fast_kind}")
        print(f"W_M = ({fmt(m.W_M[0])}, {fmt(m.W_M[1])})  residual {m.residual:.3e}")
        for w in sol.waves:
            print(f"  {w.kind:5s} speeds [{fmt(w.speed_lo)}, {fmt(w.speed_hi)}]")
    for note in sol.notes:
        print(f"note: {note}", file=sys.stderr)
    if args.validate:
        rep = validate(sol, n=args.validate, cfl=args.cfl)
        prof = rep.pop("profile")
        _write(out, "fv_profile.csv", f"# {FORMAT} fv N={args.validate}\n" + prof.to_csv())
        _write(out, "validation.json", dump_json(rep))
        print(f"FV N={args.validate}: L1 error {fmt(rep['l1'])} (relative {fmt(rep['relative'])})")
    return 0


def cmd_export(args, params):
    from .riemann import build_intermediate_surface
    from .surfaces import Mesh, _grid_mesh
    from .wave_curves import build_fast_wave_curve, build_slow_wave_curve

    out = Path(args.out)
    obj = args.object
    head = f"{FORMAT} {obj} params={json.dumps(params.to_dict())}"
    if obj in ("C", "Son", "Son'", "SCC"):
        mesh = export_surface_mesh(params, obj, (args.z_range, args.tau_range, args.y_range),
                                   args.resolution)
        name = obj.replace("'", "prime")
        _write(out, f"{name}.obj", mesh.to_obj(head))
        _write(out, f"{name}.csv", mesh.to_csv(head))
        print(f"{obj}: {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles")
    elif obj in ("ECCprime", "inflection", "double-sonic", "coincidence"):
        pts = curve_samples(params, obj, args.z_range, args.resolution)
        rows = ["%.12g,%.12g,%.12g" % tuple(p) for p in pts]
        _write(out, f"{obj}.csv", f"# {head}\nz,tau,Y\n" + "\n".join(rows) + "\n")
        print(f"{obj}: {len(pts)} samples")
    elif obj in ("wave-curve", "intermediate-surface"):
        if args.point is not None:
            base = ManifoldPoint(*args.point)
        elif args.state is not None:
            base = raise_state(params, args.state, args.family)
        else:
            print("--point or --state is required", file=sys.stderr)
            return 1
        build = build_slow_wave_curve if args.family == "slow" else build_fast_wave_curve
        curve = build(params, base, args.z_max)
        if obj == "wave-curve":
            _write(out, f"wave_curve_{args.family}.json", dump_json(curve.to_dict()))
            print(curve.structure_string())
        else:
            if args.family != "slow":
                print("the intermediate surface is built on a slow curve", file=sys.stderr)
                return 1
            surf = build_intermediate_surface(params, curve, args.z_range,
                                              (args.resolution, args.resolution))
            P = surf.points
            mesh = _grid_mesh(P[..., 0], P[..., 1], P[..., 2])
            _write(out, "intermediate_surface.obj", mesh.to_obj(head))
            _write(out, "intermediate_surface.csv", mesh.to_csv(head))
            print(f"intermediate surface: {len(mesh.vertices)} vertices")
    else:
        print(f"unknown object {obj}", file=sys.stderr)
        return 1
    return 0


def cmd_classify(args, params):
    from .foliations import classify_son_prime

    p = ManifoldPoint(*args.point)
    _, r_prime = son_residuals(params, p)
    if p.z != 0 and abs(r_prime) <= args.tol * (1.0 + abs(p.tau) + abs(p.y)):
        print("boundary: point lies on Son'")
        print(f"Son' point: {classify_son_prime(params, p.z, p.y)}")
        return 0
    try:
        lab = region_classify(params, p, args.tol)
    except OnBoundary as e:
        print(f"boundary: {e}")
        return 0
    slow_ok, fast_ok = lax_conditions(params, p)
    flags = [f for f, ok in (("lax_slow", slow_ok), ("lax_fast", fast_ok)) if ok]
    print(", ".join([f"region {lab.name}"] + flags))
    return 0


# --- entry --------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="wavemanifold", description=__doc__)
    ap.add_argument("--version", action="version", version=FORMAT)
    ap.add_argument("--config", help="parameter file (JSON or key=value)")
    for k in ("b1", "a1", "a2", "a3", "a4"):
        ap.add_argument(f"--{k}", type=float)
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--z-max", type=float, default=Z_MAX)
    ap.add_argument("--tol", type=float, default=BOUNDARY_TOL)
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a Riemann problem")
    s.add_argument("--wl", type=_pair, required=True)
    s.add_argument("--wr", type=_pair, required=True)
    s.add_argument("--profile-at", type=float, help="write the profile at this time instead of in x/t")
    s.add_argument("--samples", type=int, default=801)
    s.add_argument("--validate", type=int, metavar="N", help="run the FV oracle with N cells")
    s.add_argument("--cfl", type=float, default=0.45)
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("export", help="export geometry")
    e.add_argument("--object", required=True,
                   choices=["C", "Son", "Son'", "SCC", "ECCprime", "inflection", "double-sonic",
                            "coincidence", "wave-curve", "intermediate-surface"])
    e.add_argument("--z-range", type=_range, default=(-3.0, 3.0))
    e.add_argument("--tau-range", type=_range, default=(-10.0, 10.0))
    e.add_argument("--y-range", type=_range, default=(-5.0, 5.0))
    e.add_argument("--resolution", type=int, default=60)
    e.add_argument("--point", type=_triple, help="base point z,tau,Y")
    e.add_argument("--state", type=_pair, help="base state u,v")
    e.add_argument("--family", choices=["slow", "fast"], default="slow")
    e.set_defaults(func=cmd_export)

    c = sub.add_parser("classify", help="classify a manifold point")
    c.add_argument("--point", type=_triple, required=True)
    c.set_defaults(func=cmd_classify)
    return ap


def _glue_negative(argv):
    """Turn "--wl -0.85,3.2" into "--wl=-0.85,3.2" so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and re.match(r"^-[\d.]", argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(_glue_negative(list(sys.argv[1:] if argv is None else argv)))
    level = os.environ.get("RM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")
    np.random.seed(args.seed)
    if args.tol <= 0:
        ap.error("--tol must be positive")
    try:
        params = load_params(args.config, b1=args.b1, a1=args.a1, a2=args.a2, a3=args.a3, a4=args.a4)
    except (ValueError, KeyError, OSError) as e:
        print(f"bad parameters: {e}", file=sys.stderr)
        return 1
    try:
        return args.func(args, params)
    except EllipticState as e:
        print(f"elliptic state: {e}", file=sys.stderr)
        return EXIT_ELLIPTIC
    except WaveManifoldError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
