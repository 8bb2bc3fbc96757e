"""Chamber walks over normal fans.

Two engines live here.  ``MinkowskiFan`` enumerates the vertices of a sum of
finite point sets by walking between maximal cones of the common normal fan,
crossing one wall at a time.  ``sweeps`` enumerates the orderings of a point
configuration induced by generic linear functionals.
"""
from __future__ import annotations

import os
from collections import deque
from fractions import Fraction
from typing import Sequence

from .exact import (
    Empty,
    ExactError,
    Witness,
    dot,
    primitive,
    line_key,
    relative_interior_witness,
    strict_cone_witness,
    sub,
    vsum,
)


class EnumerationGuard(ExactError):
    pass


DEFAULT_GUARD = 200_000


def guard_limit(default: int = DEFAULT_GUARD) -> int:
    """Enumeration cap, raised by setting the PIVOTAL_GUARD environment variable."""
    raw = os.environ.get("PIVOTAL_GUARD")
    if raw:
        try:
            return max(default, int(raw))
        except ValueError:
            pass
    return default


def generic_weight(dim: int, differences: Sequence[Sequence], start: int = 2) -> tuple:
    """A point on the moment curve avoiding every hyperplane orthogonal to a difference."""
    diffs = [d for d in differences if any(x != 0 for x in d)]
    t = start
    while True:
        w = tuple(Fraction(t) ** k for k in range(dim))
        if all(dot(w, d) != 0 for d in diffs):
            return w
        t += 1


class MinkowskiFan:
    """Normal fan of the Minkowski sum of ``summands`` (lists of points)."""

    def __init__(self, summands: Sequence[Sequence[Sequence]], dim: int):
        self.dim = dim
        self.summands = [tuple(tuple(Fraction(x) for x in p) for p in s) for s in summands]
        for s in self.summands:
            if not s:
                raise ValueError("empty summand")
            for p in s:
                if len(p) != dim:
                    raise ValueError("summand point of wrong dimension")

    # selections are tuples of option indices, one per summand

    def select(self, w: Sequence) -> tuple | None:
        """Argmax option per summand; None if some argmax is not unique."""
        out = []
        for s in self.summands:
            vals = [dot(w, p) for p in s]
            m = max(vals)
            idx = [i for i, v in enumerate(vals) if v == m]
            if len(idx) != 1:
                return None
            out.append(idx[0])
        return tuple(out)

    def tie_sets(self, w: Sequence) -> tuple:
        out = []
        for s in self.summands:
            vals = [dot(w, p) for p in s]
            m = max(vals)
            out.append(frozenset(i for i, v in enumerate(vals) if v == m))
        return tuple(out)

    def point(self, sel: Sequence[int]) -> tuple:
        return vsum((s[i] for s, i in zip(self.summands, sel)), self.dim)

    def constraints(self, sel: Sequence[int]) -> list:
        """(summand, rival option, chosen minus rival) for every rival."""
        out = []
        for k, (s, i) in enumerate(zip(self.summands, sel)):
            for j, p in enumerate(s):
                if j != i:
                    out.append((k, j, sub(s[i], p)))
        return out

    def classes(self, sel: Sequence[int]) -> dict:
        """Constraints grouped by the ray they span."""
        groups: dict = {}
        for k, j, g in self.constraints(sel):
            if all(x == 0 for x in g):
                # coincident options can never be separated
                groups.setdefault(None, []).append((k, j, g))
                continue
            groups.setdefault(primitive(g), []).append((k, j, g))
        return groups

    def witness(self, sel: Sequence[int]):
        cons = [g for _, _, g in self.constraints(sel)]
        if not cons:
            return Witness(tuple(Fraction(0) for _ in range(self.dim)))
        return strict_cone_witness(cons)

    def seed(self) -> tuple:
        diffs = [g for k, s in enumerate(self.summands) for i in range(len(s))
                 for j in range(i + 1, len(s)) for g in [sub(s[i], s[j])]]
        w = generic_weight(self.dim, diffs)
        sel = self.select(w)
        assert sel is not None
        return sel

    def flip(self, sel: Sequence[int], key, groups: dict) -> tuple:
        h = tuple(Fraction(x) for x in key)
        new = list(sel)
        best: dict = {}
        for k, j, _ in groups[key]:
            val = dot(h, self.summands[k][j])
            if k not in best or val < best[k][0]:
                best[k] = (val, j)
        for k, (_, j) in best.items():
            new[k] = j
        return tuple(new)

    def enumerate(self, guard: int | None = None):
        """Walk all maximal cones.

        Returns (selections, witnesses, edges) with selections sorted and edges
        as index pairs into that sorted list."""
        limit = guard if guard is not None else guard_limit()
        start = self.seed()
        seen = {start}
        processed = set()
        adj: set = set()
        queue = deque([start])
        while queue:
            sel = queue.popleft()
            groups = self.classes(sel)
            if None in groups:
                raise ValueError("a summand lists the same point twice")
            keys = list(groups)
            for key in keys:
                cand = self.flip(sel, key, groups)
                if cand in processed:
                    # the wall was already examined from the other side
                    continue
                strict = [tuple(Fraction(x) for x in k2) for k2 in keys if k2 != key]
                tight = [tuple(Fraction(x) for x in key)]
                if strict:
                    res = relative_interior_witness(strict, tight)
                else:
                    res = Witness(tuple(Fraction(0) for _ in range(self.dim)))
                if isinstance(res, Empty):
                    continue
                adj.add((sel, cand))
                if cand not in seen:
                    seen.add(cand)
                    queue.append(cand)
                    if len(seen) > limit:
                        raise EnumerationGuard(f"more than {limit} maximal cones")
            processed.add(sel)
        sels = sorted(seen, key=lambda s: (self.point(s), s))
        index = {s: i for i, s in enumerate(sels)}
        edges = sorted({tuple(sorted((index[a], index[b]))) for a, b in adj})
        witnesses = []
        for s in sels:
            res = self.witness(s)
            if not isinstance(res, Witness):
                raise AssertionError("walk reached a selection with no interior point")
            witnesses.append(res.w)
        return sels, witnesses, edges


# ---------------------------------------------------------------- sweeps


def _ordering_for(w, points) -> tuple:
    vals = [dot(w, p) for p in points]
    return tuple(sorted(range(len(points)), key=lambda i: vals[i]))


def ordering_witness(points: Sequence[Sequence], ordering: Sequence[int]):
    """Witness w ordering the points increasingly as listed, or Empty."""
    dirs = [sub(points[b], points[a]) for a, b in zip(ordering, ordering[1:])]
    if not dirs:
        return Witness(tuple(Fraction(0) for _ in points[0]))
    return strict_cone_witness(dirs)


def sweeps(points: Sequence[Sequence], guard: int | None = None):
    """All orderings (increasing by a generic functional) of distinct points.

    Returns (orderings sorted, witnesses, edges between orderings)."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    n = len(pts)
    if len(set(pts)) != n:
        raise ValueError("sweep configuration has repeated points")
    if n == 0:
        return [], [], []
    dim = len(pts[0])
    if n == 1:
        return [(0,)], [tuple(Fraction(0) for _ in range(dim))], []
    limit = guard if guard is not None else guard_limit()
    classes: dict = {}
    for i in range(n):
        for j in range(i + 1, n):
            classes.setdefault(line_key(sub(pts[i], pts[j])), []).append((i, j))
    pair_class = {}
    for key, pairs in classes.items():
        for p in pairs:
            pair_class[p] = key
    w = generic_weight(dim, [sub(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n)])
    start = _ordering_for(w, pts)
    seen = {start}
    processed = set()
    adj = set()
    queue = deque([start])
    while queue:
        order = queue.popleft()
        pos = [0] * n
        for r, i in enumerate(order):
            pos[i] = r
        cand_keys = []
        for a, b in zip(order, order[1:]):
            key = pair_class[(min(a, b), max(a, b))]
            if key not in cand_keys:
                cand_keys.append(key)
        for key in cand_keys:
            score = pos[:]
            for i, j in classes[key]:
                lo, hi = (i, j) if pos[i] < pos[j] else (j, i)
                score[lo] += 1
                score[hi] -= 1
            if sorted(score) != list(range(n)):
                continue
            new = [0] * n
            for i, s in enumerate(score):
                new[s] = i
            new = tuple(new)
            if new in processed:
                continue
            if new not in seen:
                if not isinstance(ordering_witness(pts, new), Witness):
                    continue
                seen.add(new)
                queue.append(new)
                if len(seen) > limit:
                    raise EnumerationGuard(f"more than {limit} sweeps")
            adj.add((order, new))
        processed.add(order)
    orders = sorted(seen)
    index = {o: i for i, o in enumerate(orders)}
    edges = sorted({tuple(sorted((index[a], index[b]))) for a, b in adj})
    wits = []
    for o in orders:
        res = ordering_witness(pts, o)
        assert isinstance(res, Witness)
        wits.append(res.w)
    return orders, wits, edges
