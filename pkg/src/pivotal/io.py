"""JSON interchange. Rationals travel as bare integers or "p/q" strings."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .branchings import NodeGraph
from .exact import fmt, to_fraction
from .polytope import Polytope, compute_edges, make_polytope


def rat(x) -> int | str:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else fmt(x)


def parse_rat(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ValueError(f"{x!r} is not an exact rational; use an integer or a 'p/q' string")
    return to_fraction(x)


def rat_vec(v: Sequence) -> list:
    return [rat(x) for x in v]


def parse_vector(text: str) -> tuple:
    """'1,2,4' or '1/2,-3' to a tuple of Fractions."""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise ValueError(f"cannot parse vector {text!r}")
    return tuple(to_fraction(p) for p in parts)


def parse_points(text: str) -> list:
    """Points separated by ';', coordinates by ','."""
    pts = [parse_vector(chunk) for chunk in text.split(";") if chunk.strip()]
    if not pts:
        raise ValueError("no points given")
    return pts


def polytope_to_json(P: Polytope) -> dict:
    return {
        "name": P.name,
        "dim": P.dim,
        "vertices": [rat_vec(v) for v in P.vertices],
        "edges": [list(e) for e in P.edges],
    }


def polytope_from_json(data: Mapping, check_edges: bool = True) -> Polytope:
    """Accepts polytope JSON as emitted by ``build`` or by the polytope constructions."""
    if not isinstance(data, Mapping) or "vertices" not in data:
        raise ValueError("polytope JSON needs a 'vertices' list")
    verts = [tuple(parse_rat(x) for x in v) for v in data["vertices"]]
    if "dim" in data and verts and int(data["dim"]) != len(verts[0]):
        raise ValueError("'dim' does not match the vertex coordinates")
    edges = data.get("edges")
    if edges is not None:
        for e in edges:
            if len(e) != 2 or not all(isinstance(i, int) and 0 <= i < len(verts) for i in e):
                raise ValueError(f"edge {e!r} does not index two vertices")
        if check_edges and len(verts) > 1:
            given = sorted({tuple(sorted(e)) for e in edges})
            if given != sorted(compute_edges(verts)):
                raise ValueError("edge list is not the edge graph of the convex hull")
    P = make_polytope(verts, edges, str(data.get("name", "")))
    if P.n > 1 and not P.edges:
        P = make_polytope(verts, compute_edges(verts), P.name)
    return P


def graph_from_json(data: Mapping) -> NodeGraph:
    if not isinstance(data, Mapping) or "nodes" not in data:
        raise ValueError("graph JSON needs a 'nodes' list")
    nodes = [n if isinstance(n, (int, str)) else str(n) for n in data["nodes"]]
    edges = [tuple(e) for e in data.get("edges", [])]
    for e in edges:
        if len(e) != 2:
            raise ValueError(f"edge {list(e)!r} does not have two ends")
    return NodeGraph.from_edges(nodes, edges)


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False)
