"""Command line entry point: ``pivotal <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys

from . import io
from .battery import Options, run_battery
from .branchings import (
    NodeGraph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    enumerate_greedy_branchings,
    greedy_branching,
    path_graph,
    potential_energy,
    reduced_indegree,
    star_graph,
)
from .exact import ExactError
from .paths_sweeps import ed_points, monotone_path_polytope, sweep_polytope
from .pivot_polytopes import neighbotope, pivot_polytope
from .polytope import cross_polytope, cube, orient, prism, simplex, zonotope
from .roots import dfs_verify_comp_roots, incomparable_pairs, parse_type, verify_witness, witness
from .rules import arborescence, parse_normalization, to_dot

SHAPES = ("cube", "simplex", "cross", "prism", "hexagon", "zonotope")


class UsageError(ValueError):
    pass


def build_shape(shape: str, dim: int | None, generators: str | None = None):
    if shape == "hexagon":
        return zonotope([(1, 0), (0, 1), (1, 1)], name="hexagon")
    if shape == "zonotope":
        if not generators:
            raise UsageError("--shape zonotope needs --generators, e.g. '1,0;0,1;1,1'")
        return zonotope(io.parse_points(generators))
    if dim is None:
        raise UsageError(f"--shape {shape} needs --dim")
    if dim < 1:
        raise UsageError("--dim must be positive")
    return {"cube": cube, "simplex": simplex, "cross": cross_polytope,
            "prism": lambda d: prism(simplex(d))}[shape](dim)


def _polytope(args):
    if args.polytope:
        return io.polytope_from_json(io.load_json(args.polytope))
    if args.shape:
        return build_shape(args.shape, args.dim, args.generators)
    raise UsageError("give --polytope FILE or --shape NAME")


def _emit(args, data) -> None:
    text = io.dumps(data)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_constructed(args, CP) -> None:
    print(f"{CP.n} vertices")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(io.dumps(CP.to_json()) + "\n")


# ---------------------------------------------------------------- commands


def cmd_build(args) -> int:
    P = build_shape(args.shape, args.dim, args.generators)
    _emit(args, io.polytope_to_json(P))
    return 0


def cmd_arborescence(args) -> int:
    P = _polytope(args)
    ori = orient(P, io.parse_vector(args.c))
    N = parse_normalization(args.norm)
    w = io.parse_vector(args.w)
    A = arborescence(ori, N, w)
    _emit(args, {
        "c": io.rat_vec(ori.c),
        "w": io.rat_vec(w),
        "normalization": N.label(),
        "arborescence": A.to_json(),
        "dot": to_dot(ori, A),
    })
    return 0


def cmd_pivot_polytope(args) -> int:
    P = _polytope(args)
    ori = orient(P, io.parse_vector(args.c))
    _emit_constructed(args, pivot_polytope(ori, parse_normalization(args.norm)))
    return 0


def cmd_neighbotope(args) -> int:
    _emit_constructed(args, neighbotope(_polytope(args), parse_normalization(args.norm)))
    return 0


def cmd_monotone(args) -> int:
    P = _polytope(args)
    _emit_constructed(args, monotone_path_polytope(orient(P, io.parse_vector(args.c))))
    return 0


def cmd_sweep(args) -> int:
    if args.points:
        pts = io.parse_points(args.points)
    else:
        pts = ed_points(_polytope(args))
    _emit_constructed(args, sweep_polytope(pts))
    return 0


def _family(text: str) -> NodeGraph:
    name, _, arg = text.partition(":")
    try:
        nums = [int(x) for x in arg.split(",")] if arg else []
    except ValueError:
        raise UsageError(f"cannot parse graph family {text!r}") from None
    builders = {"path": path_graph, "cycle": cycle_graph, "complete": complete_graph,
                "star": star_graph, "bipartite": complete_bipartite}
    if name not in builders:
        raise UsageError(f"unknown graph family {name!r}; expected one of {', '.join(builders)}")
    return builders[name](*nums)


def _potentials(G: NodeGraph, text: str) -> dict:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if parts and all("=" in p for p in parts):
        lookup = {str(v): v for v in G.nodes}
        out = {}
        for p in parts:
            k, _, val = p.partition("=")
            if k.strip() not in lookup:
                raise UsageError(f"potential for unknown node {k.strip()!r}")
            out[lookup[k.strip()]] = io.parse_rat(val.strip())
        return out
    if len(parts) != G.n:
        raise UsageError(f"{len(parts)} potentials for {G.n} nodes")
    return {v: io.parse_rat(p) for v, p in zip(G.nodes, parts)}


def cmd_branching(args) -> int:
    if args.graph:
        G = io.graph_from_json(io.load_json(args.graph))
    elif args.family:
        G = _family(args.family)
    else:
        raise UsageError("give --graph FILE or --family NAME:ARGS")
    out = {"graph": G.to_json()}
    if args.potentials:
        c = _potentials(G, args.potentials)
        br = greedy_branching(G, c)
        out["potentials"] = {str(k): io.rat(v) for k, v in c.items()}
        out["branching"] = br.to_json()
        out["energy"] = io.rat(potential_energy(G, c, br))
        out["reduced_indegree"] = list(reduced_indegree(br))
    if args.enumerate:
        found = enumerate_greedy_branchings(G)
        out["greedy_count"] = len(found)
        out["greedy_branchings"] = [b.to_json() for b in found]
    if len(out) == 1:
        raise UsageError("nothing to do; give --potentials and/or --enumerate")
    _emit(args, out)
    return 0


def cmd_roots(args) -> int:
    R = parse_type(args.type)
    if args.check == "witness":
        rows = []
        for a, b in incomparable_pairs(R):
            W = witness(R, a, b)
            verify_witness(R, W)
            rows.append(W.to_json())
        print(f"witnesses={len(rows)} verified=true")
        report = {"type": R.label, "witnesses": rows}
    else:
        method = "dfs" if args.check == "dfs" else "pairs"
        if method == "dfs" and R.label in ("E7", "E8") and not args.long:
            method = "pairs"
        report = dfs_verify_comp_roots(R, method)
        print(f"pairs={report['pairs']} covered={str(report['covered']).lower()}")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(io.dumps(report) + "\n")
    return 0


def cmd_verify(args) -> int:
    if args.suite != "paper":
        raise UsageError(f"unknown suite {args.suite!r}")
    crit = None
    if args.criteria:
        try:
            crit = [int(x) for x in args.criteria.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse --criteria {args.criteria!r}") from None
    rows = run_battery(crit, Options(max_dim=args.max_dim, long=args.long), workers=args.workers)
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["claim", "expected", "computed", "pass"])
    for r in rows:
        writer.writerow(r.csv_fields())
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0 if all(r.passed for r in rows) else 1


# ---------------------------------------------------------------- parser


def _add_source(p) -> None:
    p.add_argument("--polytope", help="polytope JSON file")
    p.add_argument("--shape", choices=SHAPES)
    p.add_argument("--dim", type=int)
    p.add_argument("--generators", help="zonotope generators, e.g. '1,0;0,1;1,1'")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pivotal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit polytope JSON")
    p.add_argument("--shape", choices=SHAPES, required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("--generators")
    p.add_argument("--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("arborescence", help="arborescence of a normalized-weight rule")
    _add_source(p)
    p.add_argument("--c", required=True)
    p.add_argument("--norm", default="gi")
    p.add_argument("--w", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_arborescence)

    p = sub.add_parser("pivot-polytope", help="pivot rule polytope")
    _add_source(p)
    p.add_argument("--c", required=True)
    p.add_argument("--norm", default="gi")
    p.add_argument("--output")
    p.set_defaults(func=cmd_pivot_polytope)

    p = sub.add_parser("neighbotope", help="neighbotope")
    _add_source(p)
    p.add_argument("--norm", default="gi")
    p.add_argument("--output")
    p.set_defaults(func=cmd_neighbotope)

    p = sub.add_parser("monotone", help="monotone path polytope")
    _add_source(p)
    p.add_argument("--c", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_monotone)

    p = sub.add_parser("sweep", help="sweep polytope of points (default: edge directions)")
    _add_source(p)
    p.add_argument("--points", help="points, e.g. '0,0;1,0;0,1'")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("branching", help="greedy branchings of a node-weighted graph")
    p.add_argument("--graph", help="graph JSON file with 'nodes' and 'edges'")
    p.add_argument("--family", help="path:N, cycle:N, complete:N, star:N or bipartite:M,N")
    p.add_argument("--potentials", help="'3,1,2' in node order or 'a=3,b=1'")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_branching)

    p = sub.add_parser("roots", help="incomparable pairs of positive roots")
    p.add_argument("--type", required=True)
    p.add_argument("--check", choices=("pairs", "witness", "dfs"), default="dfs")
    p.add_argument("--long", action="store_true", help="allow the full walk for E7 and E8")
    p.add_argument("--output")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("verify", help="run the acceptance battery and emit CSV")
    p.add_argument("--suite", default="paper")
    p.add_argument("--max-dim", type=int)
    p.add_argument("--long", action="store_true")
    p.add_argument("--criteria", help="comma separated subset, e.g. '1,4'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ExactError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
