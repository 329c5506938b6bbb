"""Batch command-line front-end.

Input point files: one point per line, whitespace- or comma-separated
reals, `#` comments; the dimension is inferred from the first data
line.  All reports are JSON; exit codes: 0 ok, 2 parse failure, 3
infeasible configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys

import numpy as np

from . import approx, complexes, coreset, diagram, homology, quadtree, wssd
from .errors import CechkitError, InvalidInput, ParseError


def load_points(path: str) -> np.ndarray:
    rows = []
    d = None
    try:
        with open(path) as fh:
            for ln, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.replace(",", " ").split()
                try:
                    row = [float(t) for t in parts]
                except ValueError:
                    raise ParseError(f"{path}:{ln}: cannot parse point") from None
                if d is None:
                    d = len(row)
                elif len(row) != d:
                    raise ParseError(f"{path}:{ln}: expected {d} coordinates")
                rows.append(row)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ParseError(f"{path}: no points (line 1)")
    return np.asarray(rows, dtype=float)


def _write_report(obj, out_path):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _diagram_json(dgm):
    return dgm.to_json_obj()


def cmd_cech(args) -> dict:
    pts = load_points(args.input)
    filt = complexes.cech_filtration(pts, args.kmax)
    dgm = homology.persist_filtration(filt, args.pmax)
    return {"command": "cech", "n": int(pts.shape[0]), "diagram": _diagram_json(dgm)}


def cmd_rips(args) -> dict:
    pts = load_points(args.input)
    filt = complexes.rips_filtration(pts, args.kmax)
    dgm = homology.persist_filtration(filt, args.pmax)
    return {"command": "rips", "n": int(pts.shape[0]), "diagram": _diagram_json(dgm)}


def cmd_completion(args) -> dict:
    pts = load_points(args.input)
    n = pts.shape[0]
    filt = complexes.cech_filtration(pts, n - 1)
    comp = complexes.completion(filt, coreset.delta(args.eps) - 1, n - 1)
    dgm = homology.persist_filtration(comp, args.pmax)
    base = homology.persist_filtration(filt, args.pmax)
    return {
        "command": "completion",
        "delta": coreset.delta(args.eps),
        "diagram": _diagram_json(dgm),
        "log_bottleneck_vs_cech": diagram.bottleneck_log(dgm, base),
    }


def cmd_wssd(args) -> dict:
    pts = load_points(args.input)
    cloud = quadtree.normalize(pts)
    qt = quadtree.build(cloud)
    if args.kmax > qt.d:
        raise InvalidInput(f"kmax {args.kmax} exceeds dimension {qt.d}")
    decomposition = wssd.build_wssd(qt, args.eps, args.kmax)
    stats = {
        f"gamma_{k}": len(decomposition.gamma(k)) for k in range(1, args.kmax + 1)
    }
    report = {
        "command": "wssd",
        "n": int(pts.shape[0]),
        "eps": args.eps,
        "sizes": stats,
    }
    if args.dump_tuples:
        report["tuples"] = [
            {
                "k": t.k,
                "cells": [[c.height, list(c.index)] for c in t.cells],
                "rad": t.rad,
            }
            for t in decomposition.all_tuples()
        ]
    return report


def cmd_approx(args) -> dict:
    pts = load_points(args.input)
    cloud = quadtree.normalize(pts)
    qt = quadtree.build(cloud)
    decomposition = wssd.build_wssd(qt, args.eps / 12.0, min(qt.d, args.kmax))
    if args.ell_min is not None and args.ell_max is not None:
        rng = (args.ell_min, args.ell_max)
    else:
        rng = approx.tower_scale_range(qt, args.eps)
    tower = approx.build_tower(qt, decomposition, args.eps, rng)
    dgm = homology.PersistenceDiagram()
    for p in range(args.pmax + 1):
        for b, d_ in homology.tower_diagram(tower, p).dim(p):
            dgm.add(p, b, d_)
    return {
        "command": "approx",
        "eps": args.eps,
        "ell_range": list(rng),
        "scales": tower.scales,
        "diagram": _diagram_json(dgm),
    }


def cmd_compare(args) -> dict:
    with open(args.dgm_a) as fh:
        d1 = homology.PersistenceDiagram.from_json_obj(json.load(fh))
    with open(args.dgm_b) as fh:
        d2 = homology.PersistenceDiagram.from_json_obj(json.load(fh))
    log_c = diagram.bottleneck_log(d1, d2)
    c = math.exp(log_c) if log_c != math.inf else math.inf
    report = diagram.is_c_approximation(d1, d2, c if c != math.inf else 1.0)
    return {
        "command": "compare",
        "log_bottleneck": log_c,
        "c": c,
        "matched_at_c": bool(report.matched) if c != math.inf else False,
    }


def cmd_coreset(args) -> dict:
    pts = load_points(args.input)
    if args.kind == "radius":
        res = coreset.radius_coreset_greedy(pts, args.eps)
    else:
        res = coreset.meb_coreset(pts, args.eps)
    return {
        "command": "coreset",
        "kind": res.kind,
        "subset": list(res.subset),
        "size": res.size,
        "factor": res.achieved_factor,
    }


def cmd_validate(args) -> dict:
    """Run the lemma suite on one input cloud and report pass/fail flags."""
    pts = load_points(args.input)
    rng = random.Random(args.seed)
    out: dict = {"command": "validate", "checks": {}}

    cloud = quadtree.normalize(pts)
    qt = quadtree.build(cloud)
    kmax = min(qt.d, 2)
    decomposition = wssd.build_wssd(qt, args.eps, kmax)

    covered = True
    n = cloud.n
    for k in range(1, kmax + 1):
        for simplex in wssd.simplices_of(n, k):
            vp = cloud.points[list(simplex)]
            if not any(wssd.covers(t, vp) for t in decomposition.gamma(k)):
                covered = False
    out["checks"]["wssd_covering"] = covered

    height_ok = True
    for t in decomposition.all_tuples():
        rho = t.rad
        for c in t.cells:
            if 2.0 ** c.height > args.eps * rho / math.sqrt(qt.d) * (1 + 1e-9):
                height_ok = False
    out["checks"]["height_bound"] = height_ok

    if pts.shape[0] <= 12:
        report = complexes.check_completion_sandwich(
            pts, args.eps, [rng.uniform(0.1, 2.0) for _ in range(5)]
        )
        out["checks"]["completion_sandwich"] = report.ok
        jung = coreset.jung_check(pts) if pts.shape[0] <= 16 else None
        if jung is not None:
            out["checks"]["jung"] = jung.ok
    out["ok"] = all(out["checks"].values())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cechkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_input=True):
        if with_input:
            p.add_argument("input")
        p.add_argument("--eps", type=float, default=0.5)
        p.add_argument("--kmax", type=int, default=2)
        p.add_argument("--pmax", type=int, default=1)
        p.add_argument("--ell-min", dest="ell_min", type=int, default=None)
        p.add_argument("--ell-max", dest="ell_max", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)

    for name, fn in [
        ("cech", cmd_cech),
        ("rips", cmd_rips),
        ("completion", cmd_completion),
        ("wssd", cmd_wssd),
        ("approx", cmd_approx),
        ("coreset", cmd_coreset),
        ("validate", cmd_validate),
    ]:
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)
        if name == "wssd":
            p.add_argument("--dump-tuples", action="store_true")
        if name == "coreset":
            p.add_argument("--kind", choices=["radius", "meb"], default="radius")

    p = sub.add_parser("compare")
    p.add_argument("dgm_a")
    p.add_argument("dgm_b")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CechkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    _write_report(report, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
