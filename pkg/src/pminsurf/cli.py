"""Command-line surface: evaluation, tracing, scanning, solving, surfaces,
sphere utilities, and verification suites.

All reports are JSON (sorted keys, schema-versioned) unless a CSV or OBJ
export is requested; a fixed --seed makes every report byte-reproducible.
Exit codes: 0 success, 1 domain errors (singular queries, out-of-domain...),
2 usage errors.
"""

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import characteristic, dirichlet, families, singular, sphere, variation
from .curvature import (Domain2, first_order_data, p_area, p_mean_curvature,
                        pmge_numerator)
from .errors import PMinSurfError
from .fields import read_grid_csv, write_grid_csv


@dataclass
class RunConfig:
    """Parsed invocation: subcommand, field source, domain, tolerances, seed."""

    subcommand: str
    family: str = None
    params: dict = None
    g_name: str = None
    grid_path: str = None
    domain: tuple = None
    tol: float = None
    seed: int = 0
    out: str = None
    fmt: str = "json"


def _parse_params(text):
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        k, v = item.split("=")
        out[k.strip()] = float(v)
    return out


def _parse_floats(text):
    return tuple(float(v) for v in text.split(","))


def build_field(cfg):
    """Construct the field named by a RunConfig (family registry or grid CSV)."""
    if cfg.grid_path:
        return read_grid_csv(cfg.grid_path)
    p = cfg.params or {}
    fam = cfg.family
    if fam == "plane":
        return families.make_plane(p.get("a", 0.0), p.get("b", 0.0), p.get("c", 0.0))
    if fam == "quad":
        gname = cfg.g_name or "zero"
        if gname not in families.G_REGISTRY:
            raise PMinSurfError(f"unknown g profile '{gname}'; "
                                f"choose from {sorted(families.G_REGISTRY)}")
        return families.make_quadratic_family(p.get("a", 1.0), p.get("b", 0.0),
                                              families.G_REGISTRY[gname]())
    if fam == "radial":
        return families.radial_paraboloid(p.get("sign", 1.0))
    if fam == "example1":
        return families.example1_field()
    if fam == "example3":
        return families.example3_field(p.get("beta", 3.0))
    if fam == "tlog":
        return families.tlog_field()
    raise PMinSurfError(f"unknown family '{fam}' and no --grid given")


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(payload, out):
    _emit(json.dumps(payload, sort_keys=True), out)


def _add_field_args(p):
    p.add_argument("--family", help="plane|quad|radial|example1|example3|tlog")
    p.add_argument("--params", default="", help="comma list k=v, e.g. a=1,b=2,c=0")
    p.add_argument("--g", default=None, help="g profile for the quad family")
    p.add_argument("--grid", default=None, help="grid CSV path (alternative to --family)")


def _cfg_from(args, sub):
    return RunConfig(subcommand=sub, family=getattr(args, "family", None),
                     params=_parse_params(getattr(args, "params", "")),
                     g_name=getattr(args, "g", None),
                     grid_path=getattr(args, "grid", None),
                     tol=getattr(args, "tol", None),
                     seed=getattr(args, "seed", 0),
                     out=getattr(args, "out", None),
                     fmt=getattr(args, "format", "json"))


def cmd_eval(args):
    cfg = _cfg_from(args, "eval")
    f = build_field(cfg)
    x, y = _parse_floats(args.at)
    fod = first_order_data(f, (x, y), tol_sing=cfg.tol)
    payload = {
        "schema": 1, "x": x, "y": y,
        "u": float(f.value(x, y)),
        "D": fod.d,
        "N": [float(fod.n[0]), float(fod.n[1])],
        "theta": fod.theta,
        "H": p_mean_curvature(f, (x, y), tol_sing=cfg.tol),
        "P": float(pmge_numerator(f, (x, y))),
    }
    _emit_json(payload, cfg.out)
    return 0


def cmd_trace(args):
    cfg = _cfg_from(args, "trace")
    f = build_field(cfg)
    start = _parse_floats(args.start)
    dom = Domain2(_parse_floats(args.domain)) if args.domain else None
    t = characteristic.trace(f, start, orientation=args.orientation,
                             max_arclength=args.max_arclength,
                             max_step=args.max_step, domain=dom)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        t.to_csv(buf)
        _emit(buf.getvalue(), cfg.out)
    else:
        payload = {
            "schema": 1,
            "termination": {"kind": t.termination.kind,
                            "point": list(t.termination.point) if t.termination.point else None},
            "n_samples": int(len(t.s)),
            "arclength": t.arclength,
            "samples": [[float(a) for a in row] for row in
                        np.stack([t.s, t.x, t.y, t.u, t.theta, t.h], axis=1)],
        }
        _emit_json(payload, cfg.out)
    return 0


def cmd_singular(args):
    cfg = _cfg_from(args, "singular")
    f = build_field(cfg)
    if args.action == "scan":
        dom = Domain2(_parse_floats(args.domain))
        rep = singular.scan_singular(f, dom, resolution=args.resolution,
                                     tol=args.tol, with_indices=args.indices)
        _emit(rep.to_json(), cfg.out)
    elif args.action == "classify":
        p0 = _parse_floats(args.at)
        cls = singular.classify(f, p0, scan_radius=args.radius)
        _emit_json({"schema": 1, "verdict": cls.verdict, "det_u": cls.det_u,
                    "det_tol": cls.det_tol,
                    "neighbors": [list(n) for n in cls.neighbors]}, cfg.out)
    elif args.action == "index":
        p0 = _parse_floats(args.at)
        w = singular.index(f, p0)
        _emit_json({"schema": 1, "index": w}, cfg.out)
    else:
        raise PMinSurfError(f"unknown singular action '{args.action}'")
    return 0


def cmd_area(args):
    cfg = _cfg_from(args, "area")
    f = build_field(cfg)
    rect = _parse_floats(args.domain)
    excl = tuple(tuple(_parse_floats(e)) for e in (args.exclude or []))
    dom = Domain2(rect, exclusions=excl)
    val = p_area(f, dom, n=args.n)
    _emit_json({"schema": 1, "p_area": val, "rect": list(rect),
                "exclusions": [list(e) for e in excl]}, cfg.out)
    return 0


def cmd_solve(args):
    cfg = _cfg_from(args, "solve")
    rect = _parse_floats(args.domain)
    eps = _parse_floats(args.eps_schedule)
    if args.boundary:
        x0, y0, x1, y1 = rect
        h = (x1 - x0) / (args.n - 1)
        barr = dirichlet.read_boundary_csv(args.boundary, args.n, args.n)
        prob = dirichlet.DirichletProblem(x0=x0, y0=y0, h=h, nx=args.n, ny=args.n,
                                          boundary=barr, eps_schedule=eps)
    else:
        f = build_field(cfg)
        prob = dirichlet.problem_from_function(
            rect, args.n, lambda X, Y: np.asarray(f.value(X, Y), dtype=float),
            eps_schedule=eps)
    grid, rep = dirichlet.solve(prob)
    if cfg.out:
        write_grid_csv(grid, cfg.out)
    _emit(rep.to_json(), None)
    return 0


def cmd_surface(args):
    cfg = _cfg_from(args, "surface")
    if args.kind == "hyperboloid":
        surf = families.hyperboloid_ruled()
    elif args.kind == "xz-graph":
        surf = families.xz_graph_ruled()
    elif args.kind == "contact-plane":
        surf = families.contact_plane_ruled((0.0, 0.0, 0.0))
    else:
        raise PMinSurfError(f"unknown surface kind '{args.kind}'")
    mesh = families.make_ruled_surface(surf, n_tau=args.n_tau, n_s=args.n_s)
    buf = io.StringIO()
    if cfg.fmt == "obj":
        mesh.to_obj(buf)
    else:
        mesh.to_csv(buf)
    _emit(buf.getvalue(), cfg.out)
    return 0


def cmd_sphere(args):
    cfg = _cfg_from(args, "sphere")
    if args.action == "torus-pmc":
        _emit_json({"schema": 1, "c": args.c, "H": sphere.torus_pmc(args.c)}, cfg.out)
    elif args.action == "great-circle":
        alpha = np.array(_parse_floats(args.alpha))
        c1, c2 = _parse_floats(args.c_dir)
        pair = sphere.GreatCirclePair.from_alpha(alpha, c1, c2)
        curve = sphere.great_circle(pair, samples=args.samples)
        buf = io.StringIO()
        curve.to_csv(buf)
        _emit(buf.getvalue(), cfg.out)
    elif args.action == "cayley":
        p = np.array(_parse_floats(args.point))
        q = sphere.cayley(p)
        _emit_json({"schema": 1, "point": list(p),
                    "image": [float(v) for v in q],
                    "lambda": float(sphere.conformal_lambda(q))}, cfg.out)
    elif args.action == "foliation-audit":
        aud = sphere.foliation_index_audit(args.surface)
        _emit(aud.to_json(), cfg.out)
    else:
        raise PMinSurfError(f"unknown sphere action '{args.action}'")
    return 0


# ---------------------------------------------------------------------------
# Verification suites.
# ---------------------------------------------------------------------------

def _check(name, value, tol, mode="abs_max"):
    ok = bool(value < tol) if mode == "abs_max" else bool(value)
    return {"name": name, "value": float(value) if mode == "abs_max" else value,
            "tolerance": tol, "pass": ok}


def _random_quad_instances(rng, count):
    out = []
    for _ in range(count):
        ang = rng.uniform(0.0, 2.0 * math.pi)
        c = rng.uniform(-1.0, 1.0, size=4)
        g = families.GTriple(
            lambda t, c=c: c[0] * np.sin(t) + c[1] * np.cos(t) + c[2] * t + c[3],
            lambda t, c=c: c[0] * np.cos(t) - c[1] * np.sin(t) + c[2],
            lambda t, c=c: -c[0] * np.sin(t) - c[1] * np.cos(t),
            name="rand")
        out.append(families.make_quadratic_family(math.cos(ang), math.sin(ang), g))
    return out


def verify_suite(name, seed=0, fast=False):
    """Run one named verification suite; returns a list of check dicts."""
    rng = np.random.default_rng(seed)
    checks = []
    if name == "identities":
        u = families.make_quadratic_family(1, 0, families.g_zero())
        v = families.make_plane(0, 0, 0)
        lhs, rhs, gap = dirichlet.structural_identity_gap(u, v, (1.0, 1.0))
        checks.append(_check("hand_case_lhs_minus_1", abs(lhs - 1.0), 1e-12))
        checks.append(_check("hand_case_rhs_minus_1", abs(rhs - 1.0), 1e-12))
        for n in (2, 4):
            draws = 2000 if fast else 20000
            worst = 0.0
            gf = dirichlet.heisenberg_f(n // 2)
            for _ in range(draws // 500):
                w = rng.standard_normal(n)
                amp = rng.uniform(-1.5, 1.5, size=(2, n))
                off = rng.uniform(-1.0, 1.0, size=2)
                gu = lambda p, k=0: amp[0] * np.cos(p @ w + off[0])[:, None] + 0.3 * p
                gv = lambda p, k=1: amp[1] * np.sin(p @ w + off[1])[:, None] - 0.2 * p
                pts = rng.uniform(-2.0, 2.0, size=(500, n))
                alpha = gu(pts) + gf(pts)
                beta = gv(pts) + gf(pts)
                keep = (np.linalg.norm(alpha, axis=1) > 0.05) & \
                       (np.linalg.norm(beta, axis=1) > 0.05)
                _, _, gaps = dirichlet.structural_identity_gap(gu, gv, pts[keep], gf)
                worst = max(worst, float(np.max(np.abs(gaps))))
            checks.append(_check(f"identity_gap_n{n}", worst, 1e-12))
        hs = rng.standard_normal((2000, 4, 4))
        hs = 0.5 * (hs + np.transpose(hs, (0, 2, 1)))
        ranks, all_ok = dirichlet.rank_audit_batch(hs, 2)
        checks.append(_check("rank_bound_holds", all_ok, True, mode="bool"))
    elif name == "families":
        worst = 0.0
        for f in _random_quad_instances(rng, 5 if fast else 10):
            xs = rng.uniform(-10, 10, 2000)
            ys = rng.uniform(-10, 10, 2000)
            worst = max(worst, float(np.max(np.abs(pmge_numerator(f, (xs, ys))))))
        checks.append(_check("quad_family_max_P", worst, 1e-10))
        f = families.make_plane(1.0, 2.0, 3.0)
        rep = singular.scan_singular(f, Domain2((-4, -2, 2, 4)), resolution=32)
        loc = rep.points[0].location if rep.points else (math.nan, math.nan)
        checks.append(_check("plane_singular_point",
                             math.hypot(loc[0] + 2.0, loc[1] - 1.0), 1e-10))
        mesh = families.make_ruled_surface(families.hyperboloid_ruled(), 64, 9)
        pts = mesh.points.reshape(-1, 3)
        defect = np.abs(pts[:, 2] ** 2 - pts[:, 0] ** 2 - pts[:, 1] ** 2 + 1.0)
        checks.append(_check("hyperboloid_implicit", float(np.max(defect)), 1e-12))
        uq = families.make_quadratic_family(0.6, 0.8, families.g_sin())
        worst_m = 0.0
        for _ in range(50):
            x, y = rng.uniform(-2, 2, size=2)
            try:
                worst_m = max(worst_m, abs(families.monge_residual(uq, (x, y))))
            except PMinSurfError:
                continue
        checks.append(_check("monge_residual_ruled_graph", worst_m, 1e-10))
    elif name == "traces":
        worst = 0.0
        for f in _random_quad_instances(rng, 3):
            start = (rng.uniform(-1, 1), rng.uniform(-1, 1))
            try:
                t = characteristic.trace(f, start, max_arclength=2.0)
            except PMinSurfError:
                continue
            if len(t.s) >= 3 and t.arclength > 0.5:
                worst = max(worst,
                            characteristic.straightness_report(t).max_chord_deviation)
        checks.append(_check("minimal_trace_straightness", worst, 1e-6))
        r = families.radial_paraboloid()
        t = characteristic.trace(r, (1.0, 0.0), max_arclength=0.9, max_step=5e-3)
        _, kap, mh = characteristic.curvature_of_trace(t)
        checks.append(_check("line_curvature_law", float(np.max(np.abs(kap - mh))), 1e-5))
        t2 = characteristic.trace(r, (1.0, 0.0), orientation=-1, max_arclength=3.0)
        checks.append(_check("radial_arrival_arclength",
                             abs(t2.s[-1] - math.sqrt(2.0)), 1e-6))
    elif name == "singular":
        e1 = families.example1_field()
        rep = singular.scan_singular(e1, Domain2((-0.2, -0.36, 0.2, -0.058)),
                                     resolution=96)
        expect = families.example1_singular_heights(5)
        errs = [min(abs(p.location[1] - e) for e in expect)
                + abs(p.location[0]) for p in rep.points]
        checks.append(_check("example1_count_is_5", len(rep.points) == 5, True,
                             mode="bool"))
        checks.append(_check("example1_location_error",
                             max(errs) if errs else math.inf, 1e-8))
        e3 = families.example3_field(3.0)
        cls = singular.classify(e3, (0.0, 0.0), scan_radius=0.05)
        checks.append(_check("example3_undetermined",
                             cls.verdict == "Undetermined" and abs(cls.det_u) < cls.det_tol,
                             True, mode="bool"))
        idx = [singular.index(families.make_plane(1, 2, 3), (-2.0, 1.0), m=m)
               for m in (360, 720, 1440)]
        checks.append(_check("plane_index_plus_one", all(i == 1 for i in idx),
                             True, mode="bool"))
        q = families.make_quadratic_family(0, 1, families.g_zero())
        poly = singular.trace_singular_curve(q, (1.0, 0.0), step=0.01,
                                             max_length=2.0,
                                             dom=Domain2((-2, -2, 2, 2)))
        checks.append(_check("xy_curve_defect", float(np.max(np.abs(poly[:, 1]))), 1e-6))
    elif name == "dirichlet":
        n = 24 if fast else 32
        prob = dirichlet.problem_from_function((0.5, 0.5, 1.5, 1.5), n,
                                               lambda X, Y: -X * Y)
        grid, rep = dirichlet.solve(prob)
        xa = grid.x0 + grid.h * np.arange(grid.nx)
        ya = grid.y0 + grid.h * np.arange(grid.ny)
        err = float(np.max(np.abs(grid.values + xa[None, :] * ya[:, None])))
        checks.append(_check("neg_xy_recovery", err, 1e-2))
        checks.append(_check("solver_converged", rep.converged, True, mode="bool"))
        prob2 = dirichlet.problem_from_function((0.5, 0.5, 1.5, 1.5), n,
                                                lambda X, Y: X - 2.0 * Y + 1.0)
        grid2, _ = dirichlet.solve(prob2)
        xa = grid2.x0 + grid2.h * np.arange(grid2.nx)
        ya = grid2.y0 + grid2.h * np.arange(grid2.ny)
        err2 = float(np.max(np.abs(grid2.values - (xa[None, :] - 2.0 * ya[:, None] + 1.0))))
        checks.append(_check("plane_recovery", err2, 1e-6))
    elif name == "variation":
        dom = Domain2((0.4, 0.4, 1.6, 1.6))
        u = families.make_quadratic_family(0, 1, families.g_zero())
        v = variation.make_bump((0.6, 0.6, 1.4, 1.4), amplitude=0.5)
        checks.append(_check("first_variation_minimal",
                             variation.first_variation_gap(u, v, dom), 1e-10))
        sv = variation.second_variation(u, v, dom)
        fd2, quad, _ = variation.energy_hessian_fd(u, v, dom)
        rel = max(abs(sv - fd2), abs(sv - quad), abs(fd2 - quad)) / abs(quad)
        checks.append(_check("consistency_triangle", rel, 1e-2))
        uxy = families.make_quadratic_family(1, 0, families.g_zero())
        xs = rng.uniform(0.3, 2.0, 100)
        ys = rng.uniform(-2.0, 2.0, 100)
        br = variation.stability_bracket(uxy, (xs, ys))
        checks.append(_check("bracket_one_over_x2",
                             float(np.max(np.abs(br - 1.0 / xs**2))), 1e-10))
        table = variation.minimizing_check(u, v, Domain2((0.5, 0.5, 1.5, 1.5)))
        checks.append(_check("minimizing_table_min",
                             -min(d for _, d in table), 1e-8))
    elif name == "sphere":
        worst_u, worst_l = 0.0, 0.0
        for _ in range(20):
            a = rng.standard_normal(4)
            a /= np.linalg.norm(a)
            ang = rng.uniform(0, 2 * math.pi)
            pair = sphere.GreatCirclePair.from_alpha(a, math.cos(ang), math.sin(ang))
            curve = sphere.great_circle(pair, samples=128)
            worst_u = max(worst_u, float(np.max(np.abs(
                np.linalg.norm(curve.points, axis=1) - 1.0))))
            worst_l = max(worst_l, float(np.max(np.abs(
                sphere.theta_hat_eval(curve.points, curve.tangents())))))
        checks.append(_check("circle_unit_norm", worst_u, 1e-12))
        checks.append(_check("circle_legendrian", worst_l, 1e-10))
        worst = 0.0
        count = 0
        while count < (100 if fast else 1000):
            q = rng.standard_normal(4)
            q /= np.linalg.norm(q)
            if abs(1.0 + (q[2] + 1j * q[3])) < 0.1:
                continue
            w = rng.standard_normal(4)
            w -= (w @ q) * q
            w /= np.linalg.norm(w)
            worst = max(worst, abs(sphere.cayley_pullback_gap(q, w)))
            count += 1
        checks.append(_check("cayley_pullback", worst, 1e-8))
        checks.append(_check("torus_pmc_minimal",
                             abs(sphere.torus_pmc(math.sqrt(0.5))), 1e-12))
        checks.append(_check("torus_pmc_06",
                             abs(sphere.torus_pmc(0.6) - 7.0 / 12.0), 1e-12))
        aud = sphere.foliation_index_audit("coordinate-sphere:y2")
        checks.append(_check("sphere_chi_2",
                             aud.chi == 2 and aud.indices == [1, 1], True, mode="bool"))
        audt = sphere.foliation_index_audit("clifford-torus")
        checks.append(_check("torus_chi_0",
                             audt.chi == 0 and audt.checks["singular_free"],
                             True, mode="bool"))
        checks.append(_check("pmc_two_route", sphere.two_route_pmc_check(), 1e-4))
    else:
        raise PMinSurfError(f"unknown verify suite '{name}'")
    return checks


SUITES = ("identities", "families", "traces", "singular", "dirichlet",
          "variation", "sphere")


def cmd_verify(args):
    cfg = _cfg_from(args, "verify")
    names = SUITES if args.suite == "all" else (args.suite,)
    payload = {"schema": 1, "seed": args.seed, "suite": args.suite, "results": []}
    for nm in names:
        for chk in verify_suite(nm, seed=args.seed, fast=args.fast):
            chk["suite"] = nm
            payload["results"].append(chk)
    payload["all_pass"] = bool(all(c["pass"] for c in payload["results"]))
    _emit_json(payload, cfg.out)
    return 0 if payload["all_pass"] else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="pmin",
        description="p-minimal surface geometry in H1 and the pseudohermitian S^3")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("eval", help="pointwise D, N, theta, H, P")
    _add_field_args(p)
    p.add_argument("--at", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("trace", help="trace a characteristic curve")
    _add_field_args(p)
    p.add_argument("--start", required=True)
    p.add_argument("--orientation", type=int, default=1, choices=(-1, 1))
    p.add_argument("--max-arclength", type=float, default=10.0)
    p.add_argument("--max-step", type=float, default=0.01)
    p.add_argument("--domain", default=None)
    p.add_argument("--out")
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("singular", help="scan/classify/index the singular set")
    p.add_argument("action", choices=("scan", "classify", "index"))
    _add_field_args(p)
    p.add_argument("--domain", default=None)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--indices", action="store_true")
    p.add_argument("--at", default=None)
    p.add_argument("--radius", type=float, default=0.05)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_singular)

    p = sub.add_parser("area", help="p-area over a rectangle minus disks")
    _add_field_args(p)
    p.add_argument("--domain", required=True)
    p.add_argument("--exclude", action="append", default=[])
    p.add_argument("--n", type=int, default=129)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_area)

    p = sub.add_parser("solve", help="regularized Dirichlet solve on a grid")
    _add_field_args(p)
    p.add_argument("--boundary", default=None, help="boundary CSV (ccw from x0,y0)")
    p.add_argument("--domain", required=True)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--eps-schedule", default="1,0.1,0.01,0.001,0.0001,0.00001,0.000001")
    p.add_argument("--out", help="grid CSV output path")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("surface", help="ruled surface meshes (OBJ/CSV)")
    p.add_argument("--kind", required=True,
                   choices=("hyperboloid", "xz-graph", "contact-plane"))
    p.add_argument("--n-tau", type=int, default=64)
    p.add_argument("--n-s", type=int, default=16)
    p.add_argument("--out")
    p.add_argument("--format", default="obj", choices=("obj", "csv"))
    p.set_defaults(fn=cmd_surface)

    p = sub.add_parser("sphere", help="3-sphere utilities")
    p.add_argument("action", choices=("torus-pmc", "great-circle", "cayley",
                                      "foliation-audit"))
    p.add_argument("--c", type=float, default=None, help="torus parameter")
    p.add_argument("--alpha", default=None, help="4-vector a1,a2,a3,a4")
    p.add_argument("--c-dir", default=None, help="direction constants c1,c2")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--point", default=None, help="4-vector x1,y1,x2,y2")
    p.add_argument("--surface", default="coordinate-sphere:y2")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_sphere)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all", choices=SUITES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fast", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)
    return ap


_VALUE_FLAGS = ("--domain", "--at", "--start", "--alpha", "--c-dir", "--point",
                "--exclude", "--params")


def _normalize_argv(argv):
    """Join value flags with their argument so values may start with '-'."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def dispatch(argv):
    """Parse argv and run; returns the process exit code."""
    ap = build_parser()
    args = ap.parse_args(_normalize_argv(argv))
    try:
        return args.fn(args)
    except PMinSurfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
