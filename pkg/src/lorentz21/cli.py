"""Command-line interface.

Subcommands load representations, multicurves, laminations and circle
graphs from files, run the constructions, and emit deterministic JSON
reports plus OBJ/CSV artifacts.  Every invariant check appears in the
report with its numeric residual; the exit status is nonzero exactly
when a check fails or an input is invalid.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import adshull, flatspace, quakes
from . import laminations as lamins
from .fuchsian import Representation, euler_class, milnor_wood_ok
from .minkowski import CausalClass, classify

SCHEMA_PREFIX = "lorentz21"


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _check(name, residual, tolerance):
    residual = float(residual)
    return {
        "name": name,
        "residual": residual,
        "tolerance": float(tolerance),
        "ok": bool(residual <= tolerance),
    }


def _report(name, args, inputs, values, checks):
    return {
        "schema": "%s/%s/1" % (SCHEMA_PREFIX, name),
        "command": [name] + ["%s=%s" % (k, v) for k, v in sorted(vars(args).items())
                             if k != "func"],
        "inputs": {k: {"path": p, "sha256": _digest(p)} for k, p in inputs.items()},
        "values": values,
        "checks": checks,
    }


def _emit(report, out=None):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if out is not None:
        _write(out, "report.json", text)
    return 0 if all(c["ok"] for c in report["checks"]) else 1


def _write(outdir, name, text):
    import os

    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_euler(args):
    rep = Representation.from_json(_load_json(args.rep))
    e = euler_class(rep)
    bound = max(0, 2 * rep.genus - 2)
    checks = [
        _check("relator-defect", rep.relator_defect(), args.tol),
        _check("milnor-wood", max(0, abs(e) - bound), 0),
    ]
    values = {"euler_class": e, "genus": rep.genus, "milnor_wood_bound": bound,
              "milnor_wood_ok": milnor_wood_ok(rep)}
    return _emit(_report("euler", args, {"rep": args.rep}, values, checks), args.out)


def _cocycle_checks(rep, coc, ball_radius, tol):
    ball = lamins._ball(rep, min(2, ball_radius))
    worst = flatspace.cocycle_identity_sweep(rep, coc, ball)
    return [
        _check("cocycle-identity", worst, tol),
        _check("relator-residual", flatspace.relator_residual(rep, coc), tol),
    ]


def cmd_flat(args):
    rep = Representation.from_json(_load_json(args.rep))
    mc = lamins.WeightedMulticurve.from_json(_load_json(args.multicurve))
    disjoint = lamins.disjointness_check(rep, mc, args.ball)
    checks = [_check("multicurve-disjoint", 0.0 if disjoint else 1.0, 0)]
    if not disjoint:
        values = {"mode": args.flat_mode, "curves": len(mc)}
        return _emit(_report("flat", args, {"rep": args.rep, "multicurve": args.multicurve},
                             values, checks), args.out)
    coc = flatspace.cocycle_from_lamination(rep, mc, L=args.ball)
    checks += _cocycle_checks(rep, coc, args.ball, args.tol)
    values = {
        "mode": args.flat_mode,
        "curves": len(mc),
        "generator_vectors": coc.to_json()["t"],
        "basepoint": [float(v) for v in coc.basepoint],
    }
    if args.flat_mode == "build":
        patch = flatspace.develop_surface(rep, mc, density=args.density,
                                          L=args.ball, seed=args.seed)
        slope = flatspace.graph_slope_check(patch)
        gap = flatspace.injectivity_gap(patch, max_pairs=20000, seed=args.seed + 1)
        bad_x = sum(1 for x in patch.xvals
                    if classify(x) not in (CausalClass.SPACELIKE, CausalClass.ZERO))
        planes = flatspace.support_planes(patch)
        checks += [
            _check("graph-slope", slope, 1.0),
            _check("injectivity-gap", -gap, 1e-9),
            _check("x-spacelike-or-zero", bad_x, 0),
        ]
        values["samples"] = len(patch)
        values["support_planes"] = len(planes)
        if args.out is not None:
            _write(args.out, "cocycle.json", json.dumps(
                {"schema": "%s/cocycle/1" % SCHEMA_PREFIX,
                 "t": values["generator_vectors"],
                 "basepoint": values["basepoint"]},
                sort_keys=True, indent=2) + "\n")
            obj = ["# developed surface point cloud, coordinates (x, y, t)"]
            obj += ["v %.9f %.9f %.9f" % tuple(p) for p in patch.fvals]
            _write(args.out, "surface.obj", "\n".join(obj) + "\n")
            _write(args.out, "support_planes.json", json.dumps(
                {"schema": "%s/support-planes/1" % SCHEMA_PREFIX,
                 "planes": [{"normal": [float(v) for v in pl.normal],
                             "offset": pl.offset} for pl in planes]},
                sort_keys=True, indent=2) + "\n")
    return _emit(_report("flat", args, {"rep": args.rep, "multicurve": args.multicurve},
                         values, checks), args.out)


def cmd_quake(args):
    lamination = quakes.lamination_from_json(_load_json(args.lamination))
    quake = quakes.EarthquakeMap(lamination, side=args.side, scale=args.scale)
    cm = quakes.boundary_value(quake, samples=args.density)
    checks = [_check("boundary-monotone", 0.0 if cm.is_monotone() else 1.0, 0)]
    values = {"leaves": len(lamination.leaves), "scale": args.scale,
              "side": args.side, "boundary_samples": len(cm)}
    inputs = {"lamination": args.lamination}
    if args.out is not None:
        _write(args.out, "boundary.csv", "\n".join(cm.to_csv_rows()) + "\n")
    if args.points is not None:
        inputs["points"] = args.points
        rows = []
        ambiguous = 0
        with open(args.points) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                p = np.array([float(v) for v in line.split(",")])
                try:
                    q = quake.apply(p)
                    rows.append("%.12f,%.12f,%.12f,%.12f,%.12f,%.12f,ok"
                                % (p[0], p[1], p[2], q[0], q[1], q[2]))
                except ValueError:
                    ambiguous += 1
                    for tag, q in zip(("limit1", "limit2"),
                                      quake.one_sided_values(p)):
                        rows.append("%.12f,%.12f,%.12f,%.12f,%.12f,%.12f,%s"
                                    % (p[0], p[1], p[2], q[0], q[1], q[2], tag))
        values["points"] = len(rows)
        values["ambiguous_points"] = ambiguous
        if args.out is not None:
            _write(args.out, "images.csv", "\n".join(rows) + "\n")
    return _emit(_report("quake", args, inputs, values, checks), args.out)


def _hull_pipeline(args, graph, inputs, extra_values):
    checks = [
        _check("graph-monotone", 0.0 if graph.is_monotone() else 1.0, 0),
        _check("graph-spacelike", 0.0 if graph.spacelike_consecutive() else 1.0, 0),
    ]
    hull = adshull.convex_hull(graph)
    quake = adshull.extract_left_earthquake(hull)
    spacing = 1.0 / len(graph)
    roundtrip = 0.0
    for (tl, tr), (_, out) in zip(graph.samples, quake.boundary_map.samples):
        d = abs(out - tr)
        roundtrip = max(roundtrip, min(d, 1.0 - d))
    lorentzian = sum(1 for f in hull.faces if f.plane.classify() == "lorentzian")
    checks += [
        _check("no-lorentzian-faces", lorentzian, 0),
        _check("vertices-on-quadric", hull.vertex_on_quadric_error(), args.tol),
        _check("convexity-slack", -hull.convexity_slack(), 1e-6),
        _check("boundary-roundtrip", roundtrip, 10.0 * spacing),
    ]
    values = dict(extra_values)
    values.update({
        "flat": hull.flat,
        "samples": len(graph),
        "hull_vertices": int(len(hull.vertex_ids)),
        "future_faces": len(hull.future_faces()),
        "past_faces": len(hull.past_faces()),
        "total_shear": float(quake.total_shear()),
        "shear_edges": [[float(w), int(i), int(j)] for w, i, j in quake.shear_edges],
        "boundary_roundtrip_sup": roundtrip,
    })
    if hull.flat:
        values["notice"] = "flat hull: graph lies on a single plane, identity earthquake"
    if args.out is not None:
        _write(args.out, "hull.obj", hull.to_obj())
        bend = [{"face_i": b.face_i, "face_j": b.face_j, "weight": b.weight,
                 "shared_vertices": [int(v) for v in b.shared_vertex_ids]}
                for b in adshull.bending_data(hull)]
        _write(args.out, "bending.json", json.dumps(
            {"schema": "%s/bending/1" % SCHEMA_PREFIX, "edges": bend},
            sort_keys=True, indent=2) + "\n")
        _write(args.out, "boundary.csv",
               "\n".join(quake.boundary_map.to_csv_rows()) + "\n")
        _write(args.out, "graph.csv", "\n".join(graph.to_csv_rows()) + "\n")
    return _emit(_report("ads", args, inputs, values, checks), args.out)


def cmd_ads_hull(args):
    with open(args.graph) as fh:
        graph = adshull.CircleGraph.from_csv_rows(fh.readlines())
    return _hull_pipeline(args, graph, {"graph": args.graph}, {"mode": "hull"})


def cmd_ads_between(args):
    rep_l = Representation.from_json(_load_json(args.repL))
    rep_r = Representation.from_json(_load_json(args.repR))
    graph = adshull.sample_conjugacy(rep_l, rep_r, args.ball)
    if args.density and args.density < len(graph):
        step = len(graph) / float(args.density)
        keep = sorted({int(i * step) for i in range(args.density)})
        graph = adshull.CircleGraph([graph.samples[i] for i in keep])
    extra = {"mode": "between", "genus": rep_l.genus,
             "relator_defect_L": rep_l.relator_defect(),
             "relator_defect_R": rep_r.relator_defect()}
    return _hull_pipeline(args, graph, {"repL": args.repL, "repR": args.repR}, extra)


def build_parser():
    p = argparse.ArgumentParser(prog="lorentz21",
                                description="flat and anti-de Sitter constant-curvature "
                                            "spacetime constructions")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, density=200):
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--ball", type=int, default=3)
        sp.add_argument("--density", type=int, default=density)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("euler", help="Euler class of a representation")
    sp.add_argument("rep")
    common(sp)
    sp.set_defaults(func=cmd_euler)

    spf = sub.add_parser("flat", help="flat spacetimes from weighted multicurves")
    fsub = spf.add_subparsers(dest="flat_mode", required=True)
    for mode in ("build", "check"):
        sp = fsub.add_parser(mode)
        sp.add_argument("rep")
        sp.add_argument("multicurve")
        common(sp)
        sp.set_defaults(func=cmd_flat, flat_mode=mode)

    sp = sub.add_parser("quake", help="earthquake along a finite lamination")
    sp.add_argument("lamination")
    sp.add_argument("scale", type=float)
    sp.add_argument("--points", default=None)
    sp.add_argument("--side", choices=("left", "right"), default="left")
    common(sp, density=256)
    sp.set_defaults(func=cmd_quake)

    spa = sub.add_parser("ads", help="anti-de Sitter convex hulls")
    asub = spa.add_subparsers(dest="ads_mode", required=True)
    sp = asub.add_parser("hull")
    sp.add_argument("graph")
    common(sp)
    sp.set_defaults(func=cmd_ads_hull)
    sp = asub.add_parser("between")
    sp.add_argument("repL")
    sp.add_argument("repR")
    common(sp)
    sp.set_defaults(func=cmd_ads_between)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except (OSError, ValueError, KeyError, TypeError,
            json.JSONDecodeError, RuntimeError) as exc:
        err = {"schema": "%s/error/1" % SCHEMA_PREFIX,
               "error": "%s: %s" % (type(exc).__name__, exc)}
        sys.stdout.write(json.dumps(err, sort_keys=True, indent=2) + "\n")
        return 2
    # timing goes to stderr so reports stay byte-identical across runs
    sys.stderr.write("elapsed %.3fs\n" % (time.perf_counter() - t0))
    return code


if __name__ == "__main__":
    sys.exit(main())
