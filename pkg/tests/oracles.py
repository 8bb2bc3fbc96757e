"""Independent reference computations used only by the tests."""
from fractions import Fraction
from itertools import combinations


def _rref(m):
    m = [list(map(Fraction, row)) for row in m]
    ncol = len(m[0]) if m else 0
    pivots = []
    r = 0
    for col in range(ncol):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m, pivots


def rref_solve(rows, rhs):
    """Some solution of rows . x = rhs by Gauss-Jordan elimination, or None."""
    ncol = len(rows[0])
    m, pivots = _rref([list(r) + [b] for r, b in zip(rows, rhs)])
    if ncol in pivots:
        return None
    x = [Fraction(0)] * ncol
    for i, col in enumerate(pivots):
        x[col] = m[i][-1]
    return x


def matrix_rank(vectors):
    return len(_rref(vectors)[1]) if vectors else 0


def affinely_independent(pts):
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    return matrix_rank(diffs) == len(diffs)


def in_convex_hull(p, pts):
    """Caratheodory: p is a convex combination of at most dim+1 affinely independent points."""
    d = len(p)
    for k in range(1, min(d + 1, len(pts)) + 1):
        for T in combinations(pts, k):
            if not affinely_independent(list(T)):
                continue
            rows = [[q[i] for q in T] for i in range(d)] + [[1] * k]
            sol = rref_solve(rows, list(p) + [1])
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def is_vertex_oracle(p, pts):
    others = [q for q in pts if q != p]
    return not others or not in_convex_hull(p, others)


def lp_2d_oracle(obj, cons):
    """Maximum of obj over a bounded 2D region {a.x <= b}: best feasible pairwise intersection."""
    best = None
    for (a1, b1), (a2, b2) in combinations(cons, 2):
        sol = rref_solve([a1, a2], [b1, b2])
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if det == 0 or sol is None:
            continue
        if all(a[0] * sol[0] + a[1] * sol[1] <= b for a, b in cons):
            val = obj[0] * sol[0] + obj[1] * sol[1]
            best = val if best is None else max(best, val)
    return best
