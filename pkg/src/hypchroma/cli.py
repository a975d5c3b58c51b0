"""Command-line surface: bounds, sampling verification, trees, heptagons.

JSON on stdout by default (12 significant digits for floats), CSV for
tabular payloads on request.  Exit codes: 0 success/verified, 1
verification failure, 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import bounds, checkerboard, chromasolve, heptile, treegeom

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(payload: dict, args) -> None:
    text = json.dumps(_round_floats(payload), indent=2)
    out_path = getattr(args, "output", None)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _out_dir() -> str:
    return os.environ.get("HYPCHROMA_OUT", ".")


def cmd_hyp_bound(args) -> int:
    if args.c is not None:
        result = bounds.interval_upper_bound(args.d, args.c)
        payload = {"d": args.d, "c": args.c, "bounds": [result.as_dict()]}
        if result.applicable:
            clique = bounds.interval_clique_points(args.d, args.c)
            payload["cliqueLowerBound"] = clique.n
            payload["best"] = result.value
        _emit(payload, args)
        return EXIT_OK
    entries = bounds.applicable_bounds(args.d)
    opt = bounds.optimize_checkerboard(args.d, args.grid_steps)
    entries.append(opt)
    best = min(e.value for e in entries if e.applicable)
    payload = {
        "d": args.d,
        "bounds": [e.as_dict() for e in entries],
        "best": best,
    }
    _emit(payload, args)
    return EXIT_OK


def cmd_hyp_verify(args) -> int:
    if args.c is not None:
        scheme = bounds.interval_scheme(args.d, args.c)
    else:
        scheme = bounds.pure_scheme(args.d)
    if args.break_scheme:
        scheme = checkerboard.Scheme(
            scheme.d_min,
            scheme.d_max,
            scheme.h,
            scheme.w,
            scheme.k_period,
            max(1, scheme.m_period - 1),
        )
    report = checkerboard.verify_by_sampling(
        scheme,
        args.samples,
        args.seed,
        jobs=args.jobs,
        allow_invalid=args.break_scheme,
    )
    payload = report.as_dict()
    payload["validation"] = checkerboard.validate_scheme(scheme).as_dict()
    _emit(payload, args)
    return EXIT_OK if report.ok else EXIT_VERIFY_FAIL


def _tree_output(args, payload: dict, ok: bool = True) -> int:
    _emit(payload, args)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def cmd_tree(args) -> int:
    q, d, radius = args.q, args.d, args.radius
    ball = treegeom.build_ball(q, radius, radius + 1)

    if args.mode == "color":
        if args.c is not None:
            color_fn = lambda v: treegeom.color_interval_tree(ball, v, d, args.c)
        elif d % 2:
            color_fn = lambda v: treegeom.color_odd(ball, v)
        else:
            color_fn = lambda v: treegeom.color_even(ball, v, d)
        dest = args.output or os.path.join(_out_dir(), f"tree_q{q}_d{d}_coloring.csv")
        treegeom.export_coloring_csv(ball, color_fn, dest)
        print(dest)
        return EXIT_OK

    if args.mode == "verify":
        if args.c is not None:
            color_fn = lambda v: treegeom.color_interval_tree(ball, v, d, args.c)
            dset = range(d, math.floor(args.c * d) + 1)
        elif d % 2:
            color_fn = lambda v: treegeom.color_odd(ball, v)
            dset = [d]
        else:
            color_fn = lambda v: treegeom.color_even(ball, v, d)
            dset = [d]
        rep = treegeom.verify_tree_coloring(ball, color_fn, dset)
        payload = {
            "q": q,
            "d": d,
            "c": args.c,
            "radius": radius,
            "checkedVertices": rep.checked_vertices,
            "checkedPairs": rep.checked_pairs,
            "violations": [list(v) for v in rep.violations[:50]],
            "ok": rep.ok,
        }
        return _tree_output(args, payload, rep.ok)

    if args.mode == "clique":
        if args.c is not None:
            picks = treegeom.interval_clique_tree(ball, d, args.c)
        else:
            picks = treegeom.clique_q(ball, d)
        return _tree_output(args, {"q": q, "d": d, "c": args.c, "vertices": picks, "size": len(picks)})

    if args.mode == "spindle":
        witness = treegeom.moser_spindle(ball, d)
        vid = {v: i for i, v in enumerate(witness.vertices)}
        edges = sorted((min(vid[a], vid[b]), max(vid[a], vid[b])) for a, b in witness.pairs)
        graph = chromasolve.DistGraph(len(witness.vertices), edges, "moser spindle")
        result = chromasolve.chromatic_number(graph, budget=args.budget)
        payload = {
            "q": q,
            "d": d,
            "vertices": witness.vertices,
            "pairs": [list(p) for p in witness.pairs],
            "chromaticNumber": result.exact,
            "status": result.status.value,
        }
        return _tree_output(args, payload, result.status is chromasolve.Status.SOLVED)

    graph = chromasolve.build_distance_graph(
        ball, d if args.c is None else (d, math.floor(args.c * d))
    )

    if args.mode == "chroma":
        result = chromasolve.chromatic_number(graph, budget=args.budget)
        payload = {
            "q": q,
            "d": d,
            "radius": radius,
            "n": graph.n,
            "m": graph.m,
            **result.as_dict(),
        }
        if result.status is chromasolve.Status.TIMEOUT:
            _emit(payload, args)
            return EXIT_BUDGET
        return _tree_output(args, payload)

    if args.mode == "export-cnf":
        if args.k is None:
            print("--k is required for export-cnf", file=sys.stderr)
            return EXIT_USAGE
        dest = args.output or os.path.join(
            _out_dir(), f"tree_q{q}_d{d}_r{radius}_k{args.k}.cnf"
        )
        chromasolve.export_dimacs_cnf(graph, args.k, dest)
        print(dest)
        return EXIT_OK

    print(f"unknown mode {args.mode}", file=sys.stderr)
    return EXIT_USAGE


def cmd_heptile(args) -> int:
    geo = heptile.heptagon_geometry()
    payload = {"geometry": geo.as_dict(), "printedWindow": [1.22, 1.77]}
    if args.depth >= 2:
        patch = heptile.color_patch(heptile.generate_patch(args.depth))
        sep = heptile.min_same_color_separation(patch)
        payload.update(
            {
                "depth": args.depth,
                "tiles": patch.n_tiles,
                "interiorTiles": len(patch.interior()),
                "sameColorSeparation": sep,
                "derivedWindow": [geo.diameter, sep],
            }
        )
        if args.csv:
            dest = args.output or os.path.join(_out_dir(), f"heptile_depth{args.depth}.csv")
            heptile.export_tiles_csv(patch, dest)
            payload["csv"] = dest
    elif args.depth >= 1:
        patch = heptile.color_patch(heptile.generate_patch(args.depth))
        payload.update({"depth": args.depth, "tiles": patch.n_tiles})
    _emit(payload, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypchroma",
        description="Bounds and verifiers for hyperbolic-plane and tree chromatic numbers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hyp-bound", help="upper bounds for the plane at distance d")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--c", type=float, default=None, help="interval factor (forbidden [d, cd])")
    p.add_argument("--grid-steps", type=int, default=512)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_hyp_bound)

    p = sub.add_parser("hyp-verify", help="sample exact forbidden-distance pairs")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--break-scheme", action="store_true", help="mutate the scheme to watch it fail")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_hyp_verify)

    p = sub.add_parser("tree", help="tree colorings, cliques, spindles, exact search")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument(
        "--mode",
        required=True,
        choices=["color", "verify", "clique", "spindle", "chroma", "export-cnf"],
    )
    p.add_argument("--k", type=int, default=None, help="color count for export-cnf")
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("heptile", help="heptagon geometry, coloring, separation")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_heptile)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
