"""Incidence combinatorics of line arrangements.

A combinatorics is a finite set of lines 0..n-1 together with a family of
"points" (subsets of lines, size >= 2) such that every pair of distinct lines
lies in exactly one point.  Provides validation, the standard multiplicity
count, builtin examples, automorphism/isomorphism backtracking, induced
subcombinatorics, the triangle census on triple points, and the connectivity
checks used by the rigidity pipeline.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb


class LineCombinatorics:
    """Immutable incidence structure (lines 0..n-1, points = frozensets)."""

    __slots__ = ("n", "points", "_point_of_pair")

    def __init__(self, n: int, points):
        self.n = int(n)
        self.points = frozenset(frozenset(p) for p in points)
        lookup = {}
        for p in self.points:
            for a, b in itertools.combinations(sorted(p), 2):
                lookup.setdefault((a, b), p)
        self._point_of_pair = lookup

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_triples(cls, n: int, triples):
        """Build from multiple points only; missing double points are added."""
        pts = [frozenset(t) for t in triples]
        covered = set()
        for p in pts:
            for pair in itertools.combinations(sorted(p), 2):
                covered.add(pair)
        for a, b in itertools.combinations(range(n), 2):
            if (a, b) not in covered:
                pts.append(frozenset((a, b)))
        return cls(n, pts)

    # -- queries -----------------------------------------------------------

    @property
    def lines(self):
        return range(self.n)

    def point_of_pair(self, a: int, b: int):
        if a > b:
            a, b = b, a
        return self._point_of_pair.get((a, b))

    def doubles(self):
        return sorted((p for p in self.points if len(p) == 2), key=sorted)

    def triples(self):
        return sorted((p for p in self.points if len(p) == 3), key=sorted)

    def max_multiplicity(self) -> int:
        return max((len(p) for p in self.points), default=0)

    def points_through(self, line: int):
        return [p for p in self.points if line in p]

    def __eq__(self, other):
        return (isinstance(other, LineCombinatorics)
                and self.n == other.n and self.points == other.points)

    def __hash__(self):
        return hash((self.n, self.points))

    def __repr__(self):
        return f"LineCombinatorics(n={self.n}, points={len(self.points)})"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        pts = sorted(sorted(p) for p in self.points)
        return json.dumps({"lines": self.n, "points": pts}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LineCombinatorics":
        d = json.loads(text)
        return cls(d["lines"], d["points"])


def validate(c: LineCombinatorics):
    """List of violations of the incidence axioms (empty iff valid)."""
    out = []
    for p in c.points:
        if len(p) < 2:
            out.append(f"point {sorted(p)} has fewer than 2 lines")
        for x in p:
            if not (0 <= x < c.n):
                out.append(f"point {sorted(p)} uses unknown line {x}")
    seen = {}
    for p in c.points:
        for a, b in itertools.combinations(sorted(p), 2):
            if (a, b) in seen and seen[(a, b)] != p:
                out.append(f"pair ({a},{b}) in two points")
            seen[(a, b)] = p
    for a, b in itertools.combinations(range(c.n), 2):
        if (a, b) not in seen:
            out.append(f"pair ({a},{b}) in no point")
    return out


def multiplicity(c: LineCombinatorics) -> int:
    """1 - #lines + sum over points of (size - 1); equals the relation count
    of the presentations produced downstream."""
    bad = validate(c)
    if bad:
        raise ValueError("invalid combinatorics: " + "; ".join(bad[:3]))
    return 1 - c.n + sum(len(p) - 1 for p in c.points)


# -- builtin examples -------------------------------------------------------

_MACLANE_T = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5),
              (1, 4, 7), (2, 4, 6), (2, 5, 7), (3, 6, 7)]
_MACLANE_D = [(0, 7), (1, 6), (2, 3), (4, 5)]

_RYB_T = [(0, 1, 2), (3, 6, 7), (0, 5, 6), (1, 4, 7), (1, 3, 5),
          (2, 4, 6), (2, 5, 7), (0, 3, 4), (8, 11, 12), (0, 10, 11),
          (1, 9, 12), (1, 8, 10), (2, 9, 11), (2, 10, 12), (0, 8, 9)]
_RYB_D = ([(2, 3), (0, 7), (1, 6), (4, 5), (2, 8), (0, 12), (1, 11), (9, 10)]
          + [(i, j) for i in range(3, 8) for j in range(8, 13)])

_CEVA_POINTS = [(0, 1), (2, 3), (4, 5), (0, 2, 4), (0, 3, 5), (1, 2, 5), (1, 3, 4)]


def builtin(name: str) -> LineCombinatorics:
    """Named combinatorics: m3, maclane, ceva, rybnikov (0-based line labels)."""
    name = name.lower()
    if name == "m3":
        return LineCombinatorics(3, [(0, 1, 2)])
    if name == "maclane":
        return LineCombinatorics(8, _MACLANE_T + _MACLANE_D)
    if name == "ceva":
        return LineCombinatorics(6, _CEVA_POINTS)
    if name == "rybnikov":
        return LineCombinatorics(13, _RYB_T + _RYB_D)
    raise ValueError(f"unknown builtin combinatorics: {name}")


# -- automorphisms and isomorphisms -----------------------------------------

@dataclass(frozen=True)
class CombAutomorphism:
    perm: tuple

    def apply_line(self, x: int) -> int:
        return self.perm[x]

    def apply_point(self, p):
        return frozenset(self.perm[x] for x in p)

    def compose(self, other: "CombAutomorphism") -> "CombAutomorphism":
        return CombAutomorphism(tuple(self.perm[other.perm[i]]
                                      for i in range(len(self.perm))))

    def inverse(self) -> "CombAutomorphism":
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return CombAutomorphism(tuple(inv))


def _line_signature(c: LineCombinatorics):
    sig = {}
    for i in range(c.n):
        sizes = sorted(len(p) for p in c.points if i in p)
        sig[i] = tuple(sizes)
    return sig


def _isomorphisms(src: LineCombinatorics, dst: LineCombinatorics, first_only=False):
    """Backtracking search for structure-preserving line bijections."""
    if src.n != dst.n:
        return []
    if sorted(map(len, src.points)) != sorted(map(len, dst.points)):
        return []
    ssig, dsig = _line_signature(src), _line_signature(dst)
    if sorted(ssig.values()) != sorted(dsig.values()):
        return []
    dst_points = dst.points
    # order lines by decreasing constraint: triple degree then double degree
    def degkey(i):
        tr = sum(1 for p in src.points if i in p and len(p) >= 3)
        db = sum(1 for p in src.points if i in p and len(p) == 2)
        return (-tr, -db, i)
    order = sorted(range(src.n), key=degkey)
    src_pts_by_line = {i: [p for p in src.points if i in p] for i in range(src.n)}
    out = []
    per = [None] * src.n
    used = [False] * src.n

    def rec(k):
        if k == src.n:
            out.append(CombAutomorphism(tuple(per)))
            return len(out) >= 1 and first_only
        i = order[k]
        for j in range(dst.n):
            if used[j] or dsig[j] != ssig[i]:
                continue
            per[i] = j
            used[j] = True
            ok = True
            for p in src_pts_by_line[i]:
                img = {per[x] for x in p if per[x] is not None}
                if len(img) == len(p) and frozenset(img) not in dst_points:
                    ok = False
                    break
            if ok and rec(k + 1):
                return True
            per[i] = None
            used[j] = False
        return False

    rec(0)
    return out


def automorphism_group(c: LineCombinatorics):
    """The full automorphism group, verified closed under composition/inverse."""
    if c.n > 16:
        raise ValueError("line count exceeds the backtracking bound (16)")
    bad = validate(c)
    if bad:
        raise ValueError("invalid combinatorics")
    group = _isomorphisms(c, c)
    perms = {g.perm for g in group}
    assert tuple(range(c.n)) in perms
    for g in group:
        if g.inverse().perm not in perms:
            raise AssertionError("automorphism set not closed under inverse")
    for g in group:
        for h in group:
            if g.compose(h).perm not in perms:
                raise AssertionError("automorphism set not closed under composition")
    return group


def is_isomorphic(a: LineCombinatorics, b: LineCombinatorics):
    """Return an isomorphism a -> b, or None."""
    found = _isomorphisms(a, b, first_only=True)
    return found[0] if found else None


# -- subcombinatorics --------------------------------------------------------

@dataclass(frozen=True)
class Subcombinatorics:
    comb: LineCombinatorics
    index_map: tuple  # new index -> original line


def subcombinatorics(c: LineCombinatorics, subset) -> Subcombinatorics:
    """Induced structure on a subset of lines (renumbered, map retained)."""
    sub = sorted(set(subset))
    if any(x < 0 or x >= c.n for x in sub):
        raise ValueError("subset contains unknown lines")
    rename = {x: i for i, x in enumerate(sub)}
    pts = []
    for p in c.points:
        q = p & set(sub)
        if len(q) >= 2:
            pts.append(frozenset(rename[x] for x in q))
    return Subcombinatorics(LineCombinatorics(len(sub), pts), tuple(sub))


# -- triangles ----------------------------------------------------------------

@dataclass(frozen=True)
class Triangle:
    """Three triple points pairwise sharing one line each.

    `sides` are the shared lines (point1&point2, point1&point3, point2&point3);
    the census counts collinear configurations (all sides equal) as well, and
    `genuine` records whether the three sides are pairwise distinct.
    """
    points: tuple
    sides: tuple

    @property
    def genuine(self) -> bool:
        return len(set(self.sides)) == 3


def triangles(c: LineCombinatorics):
    """All 3-sets of triple points pairwise sharing a line."""
    tr = c.triples()
    out = []
    for a, b, d in itertools.combinations(tr, 3):
        ab, ad, bd = a & b, a & d, b & d
        if len(ab) == 1 and len(ad) == 1 and len(bd) == 1:
            out.append(Triangle(points=(a, b, d),
                                sides=(next(iter(ab)), next(iter(ad)), next(iter(bd)))))
    return out


def triangle_count_of(c: LineCombinatorics, point) -> int:
    point = frozenset(point)
    return sum(1 for t in triangles(c) if point in t.points)


# -- connectivity checks used by the rigidity endgame -------------------------

@dataclass(frozen=True)
class ConnectivityReport:
    triple_chain_connected: bool
    off_column_coverage: bool


def _connected(nodes, edges) -> bool:
    nodes = set(nodes)
    if not nodes:
        return True
    adj = {v: set() for v in nodes}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    stack = [next(iter(nodes))]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(adj[v] - seen)
    return seen == nodes


def connectivity_checks(c: LineCombinatorics) -> ConnectivityReport:
    """Chain-connectivity of lines through triple points, and for every line j
    whether the triple points avoiding j cover and connect all other lines."""
    tr = c.triples()
    edges = [(a, b) for p in tr for a, b in itertools.combinations(sorted(p), 2)]
    chain = _connected(range(c.n), edges)
    coverage = True
    for j in range(c.n):
        avoid = [p for p in tr if j not in p]
        covered = set().union(*avoid) if avoid else set()
        others = set(range(c.n)) - {j}
        if covered != others:
            coverage = False
            break
        edges_j = [(a, b) for p in avoid for a, b in itertools.combinations(sorted(p), 2)]
        if not _connected(others, edges_j):
            coverage = False
            break
    return ConnectivityReport(chain, coverage)


def pair_partition_holds(c: LineCombinatorics) -> bool:
    """Sum over points of C(size,2) equals C(#lines,2)."""
    return sum(comb(len(p), 2) for p in c.points) == comb(c.n, 2)
