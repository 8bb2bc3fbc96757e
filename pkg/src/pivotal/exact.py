"""Exact rational vectors and a rational simplex engine.

Scalars are ``fractions.Fraction``; vectors are tuples of Fractions.  The LP
solver runs a dense two-phase tableau simplex with Bland's rule.  Internally
each tableau row is kept as a list of Python integers, scaled by an arbitrary
positive factor, which keeps the arithmetic exact and avoids the overhead of
normalizing a Fraction after every operation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Scalar = Fraction
Vector = tuple  # tuple[Fraction, ...]


class ExactError(Exception):
    """Base class for errors raised by the library."""


class DimensionMismatch(ExactError):
    pass


class EmptyInput(ExactError):
    pass


class PointNotInSet(ExactError):
    pass


# ---------------------------------------------------------------- scalars


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction or a string like ``"3/4"`` exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point input is not accepted; pass a string or Fraction")
    return Fraction(x)


def vec(*coords) -> Vector:
    if len(coords) == 1 and not isinstance(coords[0], (int, str, Fraction)):
        coords = tuple(coords[0])
    return tuple(to_fraction(c) for c in coords)


def zero(dim: int) -> Vector:
    return (Fraction(0),) * dim


def unit(dim: int, i: int) -> Vector:
    return tuple(Fraction(1 if k == i else 0) for k in range(dim))


def _check(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionMismatch(f"vectors of length {len(a)} and {len(b)}")


def dot(a: Sequence, b: Sequence) -> Fraction:
    _check(a, b)
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vector:
    _check(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    _check(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(s, a: Sequence) -> Vector:
    s = to_fraction(s)
    return tuple(s * x for x in a)


def neg(a: Sequence) -> Vector:
    return tuple(-x for x in a)


def vsum(vectors: Iterable[Sequence], dim: int) -> Vector:
    total = [Fraction(0)] * dim
    for v in vectors:
        if len(v) != dim:
            raise DimensionMismatch(f"expected length {dim}, got {len(v)}")
        for i, x in enumerate(v):
            total[i] += x
    return tuple(total)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Sequence) -> tuple:
    """Integer vector on the same ray as ``a`` with coprime entries."""
    den = lcm(*(Fraction(x).denominator for x in a)) if a else 1
    ints = [int(Fraction(x) * den) for x in a]
    g = gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def line_key(a: Sequence) -> tuple:
    """Key identifying the line through ``a`` (sign normalized)."""
    p = primitive(a)
    for x in p:
        if x != 0:
            return p if x > 0 else tuple(-y for y in p)
    return p


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Sequence) -> str:
    return "(" + ",".join(fmt(Fraction(x)) for x in v) + ")"


# ---------------------------------------------------------------- results


@dataclass(frozen=True)
class Optimal:
    point: Vector
    value: Fraction


@dataclass(frozen=True)
class Infeasible:
    pass


@dataclass(frozen=True)
class Unbounded:
    pass


@dataclass(frozen=True)
class Witness:
    w: Vector


@dataclass(frozen=True)
class Empty:
    pass


LPResult = Union[Optimal, Infeasible, Unbounded]


@dataclass(frozen=True)
class Constraint:
    normal: Vector
    rhs: Fraction
    relation: str = "<="  # "<=" or "="

    def __post_init__(self):
        if self.relation not in ("<=", "="):
            raise ValueError(f"unknown relation {self.relation!r}")


@dataclass(frozen=True)
class LinearProgram:
    """Maximize ``objective . x`` subject to the constraints.

    Variables are free unless ``nonnegative`` is set.
    """

    objective: Vector
    constraints: tuple
    nonnegative: bool = False

    @property
    def dim(self) -> int:
        return len(self.objective)


# ---------------------------------------------------------------- tableau


def _int_row(row: Sequence[Fraction]) -> list:
    den = 1
    for x in row:
        if x.denominator != 1:
            den = lcm(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = gcd(*ints)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


class _Tableau:
    """Rows are integer lists (coefficients then rhs), each a positive
    multiple of the true tableau row.  The objective row carries its own
    positive scale so that the true objective value is rhs / scale."""

    def __init__(self, rows, basis, obj, obj_scale):
        self.rows = rows
        self.basis = basis
        self.obj = obj
        self.obj_scale = obj_scale

    def pivot(self, r: int, c: int) -> None:
        pr = self.rows[r]
        p = pr[c]
        nz = [j for j, x in enumerate(pr) if x]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            a = row[c]
            if a == 0:
                continue
            new = [x * p for x in row]
            for j in nz:
                new[j] -= a * pr[j]
            g = gcd(*new)
            if g > 1:
                new = [x // g for x in new]
            self.rows[i] = new
        a = self.obj[c]
        if a:
            new = [x * p for x in self.obj]
            for j in nz:
                new[j] -= a * pr[j]
            scale_ = self.obj_scale * p
            g = gcd(scale_, *new)
            if g > 1:
                new = [x // g for x in new]
                scale_ //= g
            self.obj = new
            self.obj_scale = scale_
        self.basis[r] = c

    def run(self, allowed: Sequence[bool]) -> str:
        """Bland's rule iterations; returns "optimal" or "unbounded"."""
        ncols = len(allowed)
        while True:
            enter = -1
            for j in range(ncols):
                if allowed[j] and self.obj[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            best = -1
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a <= 0:
                    continue
                if best < 0:
                    best = i
                    continue
                brow = self.rows[best]
                # compare row[-1]/a with brow[-1]/brow[enter]
                lhs = row[-1] * brow[enter]
                rhs = brow[-1] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
            if best < 0:
                return "unbounded"
            self.pivot(best, enter)

    def values(self, ncols: int) -> list:
        out = [Fraction(0)] * ncols
        for row, b in zip(self.rows, self.basis):
            out[b] = Fraction(row[-1], row[b])
        return out


def _simplex_standard(A, b, kinds, c) -> tuple:
    """Maximize c.x over x >= 0 with rows A x (<= or =) b.  Data are Fractions.

    Returns ("optimal", x, value) | ("infeasible",) | ("unbounded",)."""
    n = len(c)
    m = len(A)
    n_slack = sum(1 for k in kinds if k == "<=")
    rows_f = []
    needs_art = []
    slack_col = n
    for i in range(m):
        coeffs = list(A[i]) + [Fraction(0)] * n_slack
        rhs = b[i]
        has_slack = False
        if kinds[i] == "<=":
            coeffs[slack_col] = Fraction(1)
            has_slack = True
            slack_col += 1
        if rhs < 0:
            coeffs = [-x for x in coeffs]
            rhs = -rhs
            has_slack = False
        rows_f.append((coeffs, rhs, has_slack))
        needs_art.append(not has_slack)
    n_art = sum(needs_art)
    ncols = n + n_slack + n_art
    rows = []
    basis = []
    art_col = n + n_slack
    slack_col = n
    art_cols = []
    for i, (coeffs, rhs, has_slack) in enumerate(rows_f):
        full = coeffs + [Fraction(0)] * n_art
        if kinds[i] == "<=":
            this_slack = slack_col
            slack_col += 1
        else:
            this_slack = None
        if needs_art[i]:
            full[art_col] = Fraction(1)
            basis.append(art_col)
            art_cols.append(art_col)
            art_col += 1
        else:
            basis.append(this_slack)
        rows.append(full + [rhs])

    is_art = [False] * ncols
    for j in art_cols:
        is_art[j] = True

    if n_art:
        # phase one: maximize -sum(artificials)
        obj = [Fraction(0)] * (ncols + 1)
        for j in art_cols:
            obj[j] = Fraction(1)
        for i, bcol in enumerate(basis):
            if is_art[bcol]:
                obj = [o - x for o, x in zip(obj, rows[i])]
        cleared = _int_row(obj + [Fraction(1)])
        tab = _Tableau([_int_row(r) for r in rows], basis, cleared[:-1], cleared[-1])
        tab.run([True] * ncols)
        if tab.obj[-1] != 0:
            # optimum of -sum(art) is negative
            return ("infeasible",)
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(tab.rows):
            if is_art[tab.basis[i]]:
                row = tab.rows[i]
                col = next((j for j in range(ncols) if not is_art[j] and row[j] != 0), -1)
                if col < 0:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                if row[col] < 0:
                    tab.rows[i] = [-x for x in row]
                tab.pivot(i, col)
            i += 1
    else:
        tab = _Tableau([_int_row(r) for r in rows], basis, [0] * (ncols + 1), 1)

    # phase two
    obj_f = [-x for x in c] + [Fraction(0)] * (ncols - n) + [Fraction(0)]
    cleared = _int_row(obj_f + [Fraction(1)])
    obj = cleared[:-1]
    obj_scale = cleared[-1]
    for i, bcol in enumerate(tab.basis):
        a = obj[bcol]
        if a:
            row = tab.rows[i]
            p = row[bcol]
            obj = [x * p - a * y for x, y in zip(obj, row)]
            obj_scale *= p
            g = gcd(obj_scale, *obj)
            if g > 1:
                obj = [x // g for x in obj]
                obj_scale //= g
    tab.obj = obj
    tab.obj_scale = obj_scale
    status = tab.run([not a for a in is_art])
    if status == "unbounded":
        return ("unbounded",)
    x = tab.values(ncols)[:n]
    value = Fraction(tab.obj[-1], tab.obj_scale)
    return ("optimal", x, value)


def lp_solve(lp: LinearProgram) -> LPResult:
    """Solve ``lp`` exactly.  Free variables are split into positive parts."""
    d = lp.dim
    obj = tuple(to_fraction(x) for x in lp.objective)
    A, b, kinds = [], [], []
    for con in lp.constraints:
        if len(con.normal) != d:
            raise DimensionMismatch(
                f"constraint of length {len(con.normal)} in a program of dimension {d}"
            )
        row = [to_fraction(x) for x in con.normal]
        if not lp.nonnegative:
            row = row + [-x for x in row]
        A.append(row)
        b.append(to_fraction(con.rhs))
        kinds.append(con.relation)
    c = list(obj) if lp.nonnegative else list(obj) + [-x for x in obj]
    res = _simplex_standard(A, b, kinds, c)
    if res[0] == "infeasible":
        return Infeasible()
    if res[0] == "unbounded":
        return Unbounded()
    x = res[1]
    point = tuple(x) if lp.nonnegative else tuple(x[i] - x[d + i] for i in range(d))
    value = dot(obj, point)
    if value != res[2]:
        raise AssertionError("objective value does not re-evaluate at the optimal point")
    for con in lp.constraints:
        lhs = dot(con.normal, point)
        ok = lhs <= con.rhs if con.relation == "<=" else lhs == con.rhs
        if not ok:
            raise AssertionError("optimal point violates a constraint")
    if lp.nonnegative and any(x < 0 for x in point):
        raise AssertionError("optimal point has a negative coordinate")
    return Optimal(point, value)


# ---------------------------------------------------------------- feasibility


def _common_dim(vectors: Sequence[Sequence]) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    return dims.pop()


def _dedup_rays(vectors: Iterable[Sequence]) -> list:
    seen = {}
    for v in vectors:
        key = primitive(v)
        if key not in seen:
            seen[key] = tuple(Fraction(x) for x in key)
    return list(seen.values())


def _strict_lp(strict: Sequence[Sequence], tight: Sequence[Sequence], d: int):
    """max t s.t. w.s >= t for s in strict, w.u = 0 for u in tight, -1 <= w_i <= 1."""
    one = Fraction(1)
    cons = []
    for s in strict:
        cons.append(Constraint(tuple(-x for x in s) + (one,), Fraction(0)))
    for u in tight:
        cons.append(Constraint(tuple(u) + (Fraction(0),), Fraction(0), "="))
    for i in range(d):
        e = [Fraction(0)] * (d + 1)
        e[i] = one
        cons.append(Constraint(tuple(e), one))
        e[i] = -one
        cons.append(Constraint(tuple(e), one))
    # t is also capped so the program stays bounded when strict is degenerate
    cons.append(Constraint((Fraction(0),) * d + (one,), one))
    return lp_solve(LinearProgram((Fraction(0),) * d + (one,), tuple(cons)))


def strict_cone_witness(directions: Sequence[Sequence]):
    """Witness(w) with w.d > 0 for every direction, or Empty()."""
    if not directions:
        raise EmptyInput("strict_cone_witness needs at least one direction")
    d = _common_dim(directions)
    dirs = _dedup_rays(directions)
    if any(all(x == 0 for x in v) for v in dirs):
        return Empty()
    res = _strict_lp(dirs, (), d)
    if not isinstance(res, Optimal) or res.value <= 0:
        return Empty()
    w = res.point[:d]
    for v in directions:
        if dot(w, v) <= 0:
            raise AssertionError("strict cone witness failed re-substitution")
    return Witness(w)


def relative_interior_witness(strict: Sequence[Sequence], tight: Sequence[Sequence]):
    """Witness(w) with w.s > 0 on ``strict`` and w.t = 0 on ``tight``, else Empty()."""
    allv = list(strict) + list(tight)
    if not allv:
        raise EmptyInput("no constraints given")
    d = _common_dim(allv)
    if not strict:
        return Witness(zero(d))
    sdirs = _dedup_rays(strict)
    if any(all(x == 0 for x in v) for v in sdirs):
        return Empty()
    tdirs = [v for v in _dedup_rays(tight) if not all(x == 0 for x in v)]
    res = _strict_lp(sdirs, tdirs, d)
    if not isinstance(res, Optimal) or res.value <= 0:
        return Empty()
    w = res.point[:d]
    for v in strict:
        if dot(w, v) <= 0:
            raise AssertionError("relative interior witness failed re-substitution")
    for v in tight:
        if dot(w, v) != 0:
            raise AssertionError("relative interior witness violates an equality")
    return Witness(w)


def hull_vertex_test(p: Sequence, points: Sequence[Sequence]) -> bool:
    """True iff ``p`` is a vertex of conv(points)."""
    p = tuple(Fraction(x) for x in p)
    pts = [tuple(Fraction(x) for x in q) for q in points]
    if p not in pts:
        raise PointNotInSet(f"{fmt_vec(p)} is not among the given points")
    others = [sub(p, q) for q in pts if q != p]
    if not others:
        return True
    return isinstance(strict_cone_witness(others), Witness)


def in_cone(target: Sequence, generators: Sequence[Sequence]) -> bool:
    """True iff ``target`` is a nonnegative combination of ``generators``."""
    d = len(target)
    if not generators:
        return all(x == 0 for x in target)
    k = len(generators)
    cons = []
    for i in range(d):
        row = tuple(Fraction(g[i]) for g in generators)
        cons.append(Constraint(row, Fraction(target[i]), "="))
    res = lp_solve(LinearProgram((Fraction(0),) * k, tuple(cons), nonnegative=True))
    return isinstance(res, Optimal)


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> tuple | None:
    """Unique solution of a square system by Gaussian elimination, or None."""
    n = len(matrix)
    M = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(M[r][n] for r in range(n))


def rank(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / p
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def nullspace(vectors: Sequence[Sequence], dim: int) -> list:
    """Basis of {x : v.x = 0 for all v}."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    pivots = []
    r = 0
    for col in range(dim):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [j for j in range(dim) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * dim
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -rows[i][f]
        basis.append(tuple(x))
    return basis


def in_hull(p: Sequence, points: Sequence[Sequence]) -> bool:
    """True iff ``p`` is a convex combination of ``points``."""
    pts = list(points)
    if not pts:
        return False
    d = len(p)
    cons = [Constraint(tuple(Fraction(1) for _ in pts), Fraction(1), "=")]
    for i in range(d):
        cons.append(Constraint(tuple(Fraction(q[i]) for q in pts), Fraction(p[i]), "="))
    res = lp_solve(LinearProgram((Fraction(0),) * len(pts), tuple(cons), nonnegative=True))
    return isinstance(res, Optimal)
