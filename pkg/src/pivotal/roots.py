"""Crystallographic root systems, root poset incomparability and witness simple systems."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as cartesian
from math import comb, factorial, gcd
from typing import Sequence

from .exact import ExactError, dot, fmt, solve_linear
from .fans import EnumerationGuard, guard_limit
from .pivot_polytopes import neighbotope
from .polytope import Polytope, zonotope
from .rules import GI


class InvalidRank(ExactError):
    pass


class NotPositiveRoot(ExactError):
    pass


class UnsupportedType(ExactError):
    pass


class CaseNotCovered(ExactError):
    pass


CLASSICAL = ("A", "B", "C", "D")
SPORADIC = ("G2", "F4", "E6", "E7", "E8")


def _e(n: int, i: int, s=1) -> list:
    out = [0] * n
    out[i - 1] = s
    return out


def _integral(v: Sequence) -> tuple:
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in v)


def _reflect(a: Sequence, b: Sequence) -> tuple:
    k = 2 * dot(a, b) / dot(a, a)
    return tuple(y - k * x for x, y in zip(a, b))


@dataclass(frozen=True)
class RootSystem:
    type: str
    rank: int
    dim: int
    roots: tuple
    positive: tuple
    simple: tuple
    c: tuple
    scale: Fraction = Fraction(1)
    _index: dict = field(default_factory=dict, compare=False, repr=False)
    _coords: dict = field(default_factory=dict, compare=False, repr=False)
    _ints: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.roots)})
        object.__setattr__(self, "_ints", {_integral(r): r for r in self.roots})
        gram = [[dot(a, b) for b in self.simple] for a in self.simple]
        coords = {}
        for r in self.roots:
            sol = solve_linear(gram, [dot(a, r) for a in self.simple])
            if sol is None:
                raise ExactError("simple roots are not independent")
            coords[r] = sol
        object.__setattr__(self, "_coords", coords)

    @property
    def label(self) -> str:
        return self.type if self.type in SPORADIC else f"{self.type}{self.rank}"

    def index(self, root) -> int:
        return self._index[tuple(Fraction(x) for x in root)]

    def coordinates(self, root) -> tuple:
        """Coefficients of ``root`` in the simple roots."""
        return self._coords[tuple(Fraction(x) for x in root)]

    def is_positive(self, root) -> bool:
        return dot(self.c, root) > 0

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "rank": self.rank,
            "scale": fmt(self.scale),
            "roots": [[fmt(x) for x in r] for r in self.roots],
            "simple": [[fmt(x) for x in r] for r in self.simple],
        }


def _finish(kind: str, rank: int, roots, c, simple=None, scale=1) -> RootSystem:
    roots = sorted({tuple(Fraction(x) for x in r) for r in roots})
    c = tuple(Fraction(x) for x in c)
    for r in roots:
        if dot(c, r) == 0:
            raise ExactError(f"objective {c} is not generic for the {kind} roots")
    pos = [r for r in roots if dot(c, r) > 0]
    if simple is None:
        posset = set(pos)
        simple = [r for r in pos
                  if not any(tuple(a - b for a, b in zip(r, s)) in posset for s in pos if s != r)]
        simple.sort(key=lambda r: dot(c, r))
    simple = tuple(tuple(Fraction(x) for x in s) for s in simple)
    if len(simple) != rank:
        raise ExactError(f"{kind}: found {len(simple)} simple roots, expected {rank}")
    R = RootSystem(kind, rank, len(c), tuple(roots), tuple(pos), simple, c, Fraction(scale))
    check_root_system(R)
    return R


def check_root_system(R: RootSystem) -> None:
    rootset = set(R.roots)
    for a in R.roots:
        if tuple(-x for x in a) not in rootset:
            raise ExactError("root set is not symmetric")
        for b in R.roots:
            k = 2 * dot(a, b) / dot(a, a)
            if k.denominator != 1:
                raise ExactError("Cartan integer is not an integer")
            if _reflect(a, b) not in rootset:
                raise ExactError("root set is not closed under reflections")
            if a != b and dot(a, b) ** 2 == dot(a, a) * dot(b, b) and dot(a, b) > 0:
                raise ExactError("two positively proportional roots")
    if set(R.simple) - set(R.positive):
        raise ExactError("simple root is not positive")
    for r in R.positive:
        co = R.coordinates(r)
        if any(x.denominator != 1 or x < 0 for x in co):
            raise ExactError("positive root is not a nonnegative integer combination of simple roots")


def build_root_system(kind: str, n: int | None = None) -> RootSystem:
    """A uses n coordinates (rank n-1); B, C, D have rank n; sporadic types ignore n."""
    kind = kind.upper()
    if kind in SPORADIC:
        if n is not None and n != int(kind[1]):
            raise InvalidRank(f"{kind} has rank {kind[1]}")
        return _sporadic(kind)
    if kind not in CLASSICAL:
        raise InvalidRank(f"unknown root system type {kind!r}")
    if n is None or n < 2:
        raise InvalidRank(f"type {kind} needs n >= 2")
    c = [n - i for i in range(n)]
    roots = []
    for i, j in combinations(range(1, n + 1), 2):
        for s in (1, -1):
            roots.append([x + y for x, y in zip(_e(n, i, s), _e(n, j, -s))])
            if kind != "A":
                roots.append([x + y for x, y in zip(_e(n, i, s), _e(n, j, s))])
    if kind in ("B", "C"):
        m = 1 if kind == "B" else 2
        for i in range(1, n + 1):
            roots.append(_e(n, i, m))
            roots.append(_e(n, i, -m))
    simple = [[x + y for x, y in zip(_e(n, i, 1), _e(n, i + 1, -1))] for i in range(1, n)]
    if kind == "A":
        return _finish("A", n - 1, roots, c, simple)
    if kind == "B":
        simple.append(_e(n, n, 1))
    elif kind == "C":
        simple.append(_e(n, n, 2))
    else:
        if n == 2:
            simple.append([1, 1])
        else:
            simple.append([x + y for x, y in zip(_e(n, n - 1, 1), _e(n, n, 1))])
    return _finish(kind, n, roots, c, simple)


def _e8_doubled() -> list:
    roots = []
    for i, j in combinations(range(8), 2):
        for si, sj in cartesian((2, -2), repeat=2):
            r = [0] * 8
            r[i], r[j] = si, sj
            roots.append(r)
    for signs in cartesian((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(list(signs))
    return roots


def _sporadic(kind: str) -> RootSystem:
    if kind == "G2":
        roots = []
        for i, j in ((0, 1), (0, 2), (1, 2)):
            for s in (1, -1):
                r = [0, 0, 0]
                r[i], r[j] = s, -s
                roots.append(r)
        for i in range(3):
            for s in (1, -1):
                roots.append([s * (2 if k == i else -1) for k in range(3)])
        return _finish("G2", 2, roots, (4, 2, 1))
    if kind == "F4":
        roots = []
        for i in range(4):
            for s in (2, -2):
                roots.append([s if k == i else 0 for k in range(4)])
        for i, j in combinations(range(4), 2):
            for si, sj in cartesian((2, -2), repeat=2):
                r = [0] * 4
                r[i], r[j] = si, sj
                roots.append(r)
        for signs in cartesian((1, -1), repeat=4):
            roots.append(list(signs))
        return _finish("F4", 4, roots, (8, 4, 2, 1), scale=2)
    e8 = _e8_doubled()
    c = [2 ** (7 - k) for k in range(8)]
    if kind == "E8":
        return _finish("E8", 8, e8, c, scale=2)
    theta = [0, 0, 0, 0, 0, 0, 1, 1]
    e7 = [r for r in e8 if dot(r, theta) == 0]
    if kind == "E7":
        return _finish("E7", 7, e7, c, scale=2)
    eta = [0, 0, 0, 0, 0, 1, -1, 0]
    e6 = [r for r in e7 if dot(r, eta) == 0]
    return _finish("E6", 6, e6, c, scale=2)


def parse_type(label: str) -> RootSystem:
    """'A3', 'B4', 'G2', ... with the rank in the label."""
    label = label.strip().upper()
    if label in SPORADIC:
        return build_root_system(label)
    if len(label) < 2 or label[0] not in CLASSICAL or not label[1:].isdigit():
        raise InvalidRank(f"cannot parse root system type {label!r}")
    r = int(label[1:])
    if label[0] == "A":
        if r < 1:
            raise InvalidRank("A needs rank >= 1")
        return build_root_system("A", r + 1)
    return build_root_system(label[0], r)


# ---------------------------------------------------------------- incomparability


def _as_root(R: RootSystem, x) -> tuple:
    r = tuple(Fraction(v) for v in x)
    if r not in R._coords or not R.is_positive(r):
        raise NotPositiveRoot(f"{[fmt(v) for v in r]} is not a positive root")
    return r


def is_incomparable(R: RootSystem, alpha, beta) -> bool:
    a, b = _as_root(R, alpha), _as_root(R, beta)
    if a == b:
        raise ValueError("the two roots coincide")
    diff = [x - y for x, y in zip(R.coordinates(b), R.coordinates(a))]
    up = all(x >= 0 for x in diff)
    down = all(x <= 0 for x in diff)
    return not (up or down)


def incomparable_pairs(R: RootSystem) -> list:
    pos = sorted(R.positive)
    return [(a, b) for a, b in combinations(pos, 2) if is_incomparable(R, a, b)]


def type_a_pair_count(n: int) -> int:
    return 2 * comb(n, 4) + comb(n, 3)


def _shape(r: tuple) -> tuple:
    """('-', i, j), ('+', i, j) or ('s', i) with 1-based i < j."""
    nz = [(k + 1, x) for k, x in enumerate(r) if x != 0]
    if len(nz) == 1:
        return ("s", nz[0][0])
    (i, x), (j, y) = nz
    return ("-", i, j) if x != y else ("+", i, j)


def classify_incomparable(R: RootSystem, alpha, beta) -> bool:
    """Interval criteria for the classical families."""
    if R.type not in CLASSICAL:
        raise UnsupportedType(f"no interval criteria for type {R.type}")
    a, b = _as_root(R, alpha), _as_root(R, beta)
    n = R.dim
    sa, sb = _shape(a), _shape(b)
    order = {"-": 0, "+": 1, "s": 2}
    if order[sa[0]] > order[sb[0]]:
        sa, sb = sb, sa
    if sa[0] == "-" and sb[0] == "-":
        (_, i, j), (_, k, l) = sa, sb
        inside = lambda x, y, p, q: p <= x and y <= q
        return not inside(i, j, k, l) and not inside(k, l, i, j)
    if sa[0] == "+" and sb[0] == "+":
        (_, i, j), (_, k, l) = sa, sb
        strictly = lambda x, y, p, q: p < x and y < q
        return strictly(i, j, k, l) or strictly(k, l, i, j)
    if sa[0] == "-" and sb[0] == "+":
        (_, k, l), (_, i, j) = sa, sb
        if R.type == "D":
            return k < i or (j == n and l == n)
        return k < i
    if sa[0] == "-" and sb[0] == "s":
        (_, k, l), (_, i) = sa, sb
        return k < i
    if sa[0] == "+" and sb[0] == "s":
        (_, k, l), (_, i) = sa, sb
        if R.type == "C":
            return k < i < l
        return i < k
    if sa[0] == "s" and sb[0] == "s":
        # e_i - e_j is a nonnegative combination of simple roots for i < j
        return False
    raise CaseNotCovered(f"no criterion for shapes {sa} and {sb}")


# ---------------------------------------------------------------- signed permutations


@dataclass(frozen=True)
class SignedPermutation:
    """window[i-1] = t_i * tau(i); the map sends e_i to t_i e_tau(i)."""

    window: tuple

    def __post_init__(self):
        n = len(self.window)
        if sorted(abs(x) for x in self.window) != list(range(1, n + 1)):
            raise ValueError(f"window {self.window} is not a signed permutation")

    @property
    def sign_changes(self) -> int:
        return sum(1 for x in self.window if x < 0)

    def apply(self, v: Sequence) -> tuple:
        out = [Fraction(0)] * len(v)
        for i, x in enumerate(self.window):
            out[abs(x) - 1] += (1 if x > 0 else -1) * v[i]
        return tuple(out)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.window)

    @staticmethod
    def parse(text: str) -> "SignedPermutation":
        return SignedPermutation(tuple(int(t) for t in text.split()))


@dataclass(frozen=True)
class Witness:
    alpha: tuple
    beta: tuple
    simple: tuple  # the simple system w(Delta), in the order of Delta
    element: SignedPermutation | None
    method: str

    def to_json(self) -> dict:
        return {
            "alpha": [fmt(x) for x in self.alpha],
            "beta": [fmt(x) for x in self.beta],
            "window": str(self.element) if self.element is not None else None,
            "simple": [[fmt(x) for x in r] for r in self.simple],
            "method": self.method,
        }


def positive_simple(R: RootSystem, simple: Sequence) -> frozenset:
    return frozenset(r for r in simple if R.is_positive(r))


def _desc(a: int, b: int) -> list:
    return list(range(a, b - 1, -1)) if a >= b else []


def _asc(a: int, b: int) -> list:
    return list(range(a, b + 1)) if a <= b else []


def _window_a(n: int, alpha: tuple, beta: tuple):
    (_, i, j), (_, k, l) = _shape(alpha), _shape(beta)
    if (k, l) < (i, j):
        i, j, k, l = k, l, i, j
    if j < k:
        w = (_desc(n, l + 1) + _desc(l - 1, k + 1) + [k, l] + _desc(k - 1, j + 1) + [i, j]
             + _desc(j - 1, i + 1) + _desc(i - 1, 1))
    else:
        w = (_desc(n, l + 1) + _desc(l - 1, j + 1) + [i, j] + _desc(j - 1, k + 1) + [k, l]
             + _desc(k - 1, i + 1) + _desc(i - 1, 1))
    return w


def _window_b1(n: int, alpha: tuple, beta: tuple):
    (_, i, j), (_, k, l) = _shape(alpha), _shape(beta)
    if (k, l) < (i, j):
        i, j, k, l = k, l, i, j
    bar = lambda xs: [-x for x in xs]
    if j < k:
        w = (_asc(1, i - 1) + _asc(i + 1, j - 1) + [j, i] + _asc(j + 1, k - 1)
             + _asc(k + 1, l - 1) + [l, k] + _asc(l + 1, n))
    else:
        w = (_asc(1, i - 1) + _asc(i + 1, k - 1) + [l, k] + _asc(k + 1, j - 1) + [j, i]
             + _asc(j + 1, l - 1) + _asc(l + 1, n))
    return bar(w)


def _try_window(R: RootSystem, window, alpha, beta):
    try:
        w = SignedPermutation(tuple(window))
    except ValueError:
        return None
    if R.type == "D" and w.sign_changes % 2:
        flipped = list(w.window)
        pos = flipped.index(R.dim) if R.dim in flipped else flipped.index(-R.dim)
        flipped[pos] = -flipped[pos]
        w = SignedPermutation(tuple(flipped))
    image = tuple(w.apply(s) for s in R.simple)
    if positive_simple(R, image) == frozenset((alpha, beta)):
        return Witness(alpha, beta, image, w, "window")
    return None


def _simple_of(R: RootSystem, f: Sequence) -> list:
    """Simple roots of the positive system cut out by f."""
    F = _integral([Fraction(x) for x in f])
    ints = R._ints
    pos = [r for r in ints if sum(a * b for a, b in zip(F, r)) > 0]
    posset = set(pos)
    out = []
    for r in pos:
        if not any(tuple(x - y for x, y in zip(r, s)) in posset for s in pos if s != r):
            out.append(ints[r])
    return out


def _element_from_functional(R: RootSystem, f: Sequence):
    """The signed permutation mapping the base chamber to the chamber of f."""
    n = R.dim
    if R.type == "A":
        tau = sorted(range(n), key=lambda j: -f[j])
        return SignedPermutation(tuple(j + 1 for j in tau))
    tau = sorted(range(n), key=lambda j: -abs(f[j]))
    signs = [1 if f[j] >= 0 else -1 for j in tau]
    if R.type == "D" and signs.count(-1) % 2:
        signs[-1] = -signs[-1]
    return SignedPermutation(tuple(s * (j + 1) for s, j in zip(signs, tau)))


def _chamber_witness(R: RootSystem, alpha, beta, attempts: int = 200, seed: int = 0):
    """Functional vanishing on alpha, beta near -c, nudged to make both positive."""
    gram = [[dot(alpha, alpha), dot(alpha, beta)], [dot(beta, alpha), dot(beta, beta)]]
    span = {r for r in R.roots if _in_span(r, alpha, beta, gram)}
    g_coef = solve_linear(gram, [1, 1])
    g = tuple(g_coef[0] * x + g_coef[1] * y for x, y in zip(alpha, beta))
    rng = random.Random(seed)
    base = tuple(-x for x in R.c)
    for attempt in range(attempts):
        if attempt:
            base = tuple(-x + Fraction(rng.randint(-50, 50), 7) for x in R.c)
        coef = solve_linear(gram, [dot(alpha, base), dot(beta, base)])
        f0 = tuple(b - coef[0] * x - coef[1] * y for b, x, y in zip(base, alpha, beta))
        outer = [r for r in R.roots if r not in span]
        if any(dot(f0, r) == 0 for r in outer):
            continue
        ratios = [abs(dot(f0, r)) / abs(dot(g, r)) for r in outer if dot(g, r) != 0]
        eps = min(ratios) / 2 if ratios else Fraction(1)
        f = tuple(x + eps * y for x, y in zip(f0, g))
        simple = _simple_of(R, f)
        if positive_simple(R, simple) == frozenset((alpha, beta)):
            return f, simple
    return None


def _in_span(r, a, b, gram) -> bool:
    coef = solve_linear(gram, [dot(a, r), dot(b, r)])
    return all(x == c0 * y + c1 * z for x, y, z, (c0, c1) in zip(r, a, b, [coef] * len(r)))


def _order_like_delta(R: RootSystem, element: SignedPermutation | None, simple: list) -> tuple:
    if element is not None:
        return tuple(element.apply(s) for s in R.simple)
    return tuple(sorted(simple))


def witness(R: RootSystem, alpha, beta) -> Witness:
    """An element w with w(Delta) meeting the positive roots exactly in {alpha, beta}."""
    a, b = _as_root(R, alpha), _as_root(R, beta)
    if not is_incomparable(R, a, b):
        raise ValueError("the roots are comparable")
    found = None
    if R.type == "A":
        found = _try_window(R, _window_a(R.dim, a, b), a, b)
    elif R.type in ("B", "C", "D") and _shape(a)[0] == "-" and _shape(b)[0] == "-":
        found = _try_window(R, _window_b1(R.dim, a, b), a, b)
    if found is None:
        res = _chamber_witness(R, a, b)
        if res is None:
            raise CaseNotCovered(f"no witness found for {a} and {b}")
        f, simple = res
        element = _element_from_functional(R, f) if R.type in CLASSICAL else None
        image = _order_like_delta(R, element, simple)
        found = Witness(a, b, image, element, "chamber")
    verify_witness(R, found)
    return found


def verify_witness(R: RootSystem, W: Witness) -> None:
    if positive_simple(R, W.simple) != frozenset((W.alpha, W.beta)):
        raise AssertionError("witness simple system meets the positive roots wrongly")
    if W.element is not None:
        if tuple(W.element.apply(s) for s in R.simple) != W.simple:
            raise AssertionError("window does not produce the stated simple system")
        if R.type == "D" and W.element.sign_changes % 2:
            raise AssertionError("type D witness with an odd number of sign changes")
    if sorted(_simple_of(R, _chamber_point(R, W.simple))) != sorted(W.simple):
        raise AssertionError("witness is not a simple system")


def _chamber_point(R: RootSystem, simple) -> tuple:
    """A functional positive exactly on the cone of ``simple``: its dual basis sum."""
    gram = [[dot(a, b) for b in simple] for a in simple]
    coef = solve_linear(gram, [1] * len(simple))
    return tuple(sum(c * s[k] for c, s in zip(coef, simple)) for k in range(R.dim))


# ---------------------------------------------------------------- search over simple systems


def weyl_order(R: RootSystem) -> int:
    if R.type == "A":
        return factorial(R.dim)
    if R.type in ("B", "C"):
        return 2 ** R.rank * factorial(R.rank)
    if R.type == "D":
        return 2 ** (R.rank - 1) * factorial(R.rank)
    return {"G2": 12, "F4": 1152, "E6": 51840, "E7": 2903040, "E8": 696729600}[R.type]


def dfs_verify_comp_roots(R: RootSystem, method: str = "auto", guard: int | None = None) -> dict:
    """Collect the pairs realized as positive parts of simple systems and compare
    them with the incomparable pairs. Comparable pairs can be realized too; they
    are reported under ``realized`` but do not count towards ``pairs``.

    ``dfs`` walks every simple system by reflecting in its members; ``pairs``
    builds one witness per incomparable pair and is used when the group is
    larger than the guard."""
    limit = guard if guard is not None else guard_limit()
    if method == "auto":
        method = "dfs" if weyl_order(R) <= limit else "pairs"
    expected = {frozenset(p) for p in incomparable_pairs(R)}
    if method == "dfs":
        if weyl_order(R) > limit:
            raise EnumerationGuard(f"{weyl_order(R)} simple systems exceed the guard {limit}")
        found = _dfs_pairs(R)
    elif method == "pairs":
        found = set()
        for a, b in sorted(tuple(sorted(p)) for p in expected):
            W = witness(R, a, b)
            found.add(frozenset((W.alpha, W.beta)))
    else:
        raise ValueError(f"unknown method {method!r}")
    return {
        "type": R.label,
        "method": method,
        "incomparable": len(expected),
        "pairs": len(found & expected),
        "realized": len(found),
        "covered": expected <= found,
    }


def _dfs_pairs(R: RootSystem) -> set:
    roots = list(R.roots)
    idx = {r: i for i, r in enumerate(roots)}
    refl = [[idx[_reflect(a, b)] for b in roots] for a in roots]
    positive = [R.is_positive(r) for r in roots]
    start = tuple(sorted(idx[s] for s in R.simple))
    seen = {start}
    stack = [start]
    pairs = set()
    while stack:
        S = stack.pop()
        pos = [i for i in S if positive[i]]
        if len(pos) == 2:
            pairs.add(frozenset(roots[i] for i in pos))
        for a in S:
            T = tuple(sorted(refl[a][b] for b in S))
            if T not in seen:
                seen.add(T)
                stack.append(T)
    if len(seen) != weyl_order(R):
        raise AssertionError(f"walk found {len(seen)} simple systems, expected {weyl_order(R)}")
    return pairs


# ---------------------------------------------------------------- zonotope bridge


def coxeter_zonotope(R: RootSystem) -> Polytope:
    """Sum of [-alpha/2, alpha/2] over the positive roots, so that edges are roots."""
    return zonotope([tuple(x / 2 for x in a) for a in R.positive], name=f"Z({R.label})")


def verify_np_roots(R: RootSystem, guard: int | None = None) -> dict:
    from .paths_sweeps import ed_points, normally_equivalent, sweep_polytope

    Z = coxeter_zonotope(R)
    ed = set(ed_points(Z))
    if ed != set(R.roots):
        raise AssertionError("edge directions of the zonotope differ from the roots")
    NP = neighbotope(Z, GI, guard)
    SP = sweep_polytope(list(R.roots), guard)
    return {
        "type": R.label,
        "zonotope_vertices": Z.n,
        "neighbotope_vertices": NP.n,
        "sweep_vertices": SP.n,
        "normally_equivalent": normally_equivalent(NP, SP),
    }
