"""Combinatorial rigidity calculus for arrangements with double/triple points.

An integer matrix acting on the first homology of the complement (columns
well defined modulo the all-ones vector) must satisfy determinantal
admissibility conditions to act on the degree-1 graded piece.  This module
decides 3-admissibility of a combinatorics by an exact branch-and-propagate
engine with replayable refutation traces and independently checked vector
certificates, sweeps all subcombinatorics, enumerates candidate permutations
of the triple points, kills non-automorphic candidates by certified rank
bounds on the constrained matrix family, and assembles the homological
rigidity verdict.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import (LineCombinatorics, Triangle, automorphism_group,
                            connectivity_checks, is_isomorphic, subcombinatorics,
                            triangles, validate)
from .exact.matrix import IntMatrix, bareiss_det, generic_rank, rank_mod_p
from .polyutil import Poly

# ---------------------------------------------------------------------------
# homology matrices and admissibility conditions
# ---------------------------------------------------------------------------


class HomologyMatrix:
    """(n x n) integer matrix with columns well defined modulo the all-ones
    vector; canonical form subtracts each column's last entry."""

    def __init__(self, entries):
        self.m = IntMatrix(entries)
        if self.m.rows != self.m.cols:
            raise ValueError("homology matrix must be square")
        self.n = self.m.rows

    def canonical(self) -> "HomologyMatrix":
        e = [row[:] for row in self.m.entries]
        n = self.n
        for j in range(n):
            last = e[n - 1][j]
            if last:
                for i in range(n):
                    e[i][j] -= last
        return HomologyMatrix(e)

    def __eq__(self, other):
        return (isinstance(other, HomologyMatrix)
                and self.canonical().m.entries == other.canonical().m.entries)

    def __hash__(self):
        return hash(tuple(map(tuple, self.canonical().m.entries)))

    def reduced(self) -> IntMatrix:
        """The induced (n-1)x(n-1) matrix on Z^n / (all-ones)."""
        e = self.m.entries
        n = self.n
        return IntMatrix([[e[i][j] - e[n - 1][j] for j in range(n - 1)]
                          for i in range(n - 1)])

    def is_invertible(self) -> bool:
        return abs(bareiss_det(self.reduced().entries)) == 1


def _det3(rows) -> int:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def check_admissibility(a: HomologyMatrix, c: LineCombinatorics) -> bool:
    """Every 3x3 determinant condition over (triple point, point) pairs."""
    if c.max_multiplicity() > 3:
        raise ValueError("admissibility conditions require only double/triple points")
    if a.n != c.n:
        raise ValueError("matrix size does not match the line count")
    e = a.m.entries
    trips = [sorted(p) for p in c.triples()]
    dbls = [sorted(p) for p in c.doubles()]
    for (i, j, k) in trips:
        for (u, v) in dbls:
            rows = [[e[i][u], e[i][v], 1],
                    [e[j][u], e[j][v], 1],
                    [e[k][u], e[k][v], 1]]
            if _det3(rows):
                return False
        for q in trips:
            u, v, w = q
            for bullet in q:
                rows = [[e[i][bullet], e[i][u] + e[i][v] + e[i][w], 1],
                        [e[j][bullet], e[j][u] + e[j][v] + e[j][w], 1],
                        [e[k][bullet], e[k][u] + e[k][v] + e[k][w], 1]]
                if _det3(rows):
                    return False
    return True


def adm_subcombinatorics(a: HomologyMatrix, point, c: LineCombinatorics):
    """Lines whose column is non-constant on the rows of the given triple
    point, packaged as a subcombinatorics (requires admissibility)."""
    if not check_admissibility(a, c):
        raise ValueError("matrix is not admissible")
    rows = sorted(point)
    if len(rows) != 3 or frozenset(point) not in c.points:
        raise ValueError("not a triple point")
    e = a.m.entries
    lines = []
    for i in range(c.n):
        col = [e[r][i] for r in rows]
        if len(set(col)) > 1:
            lines.append(i)
    return subcombinatorics(c, lines)


# ---------------------------------------------------------------------------
# 3-admissibility: certificates, refutation traces, decision engine
# ---------------------------------------------------------------------------


def check_3_admissible_certificate(c: LineCombinatorics, vectors) -> bool:
    """Independent validator knowing only the defining conditions: nonzero
    integer plane vectors per line, some triple point spanning rank two,
    per-point dependence of each member with the point sum, global sum zero."""
    if len(vectors) != c.n:
        return False
    vecs = [tuple(map(int, v)) for v in vectors]
    if any(v == (0, 0) for v in vecs):
        return False
    def cross(p, q):
        return p[0] * q[1] - p[1] * q[0]
    rank2 = False
    for p in c.triples():
        a, b, d = (vecs[i] for i in sorted(p))
        if cross(a, b) or cross(a, d) or cross(b, d):
            rank2 = True
            break
    if not rank2:
        return False
    for p in c.points:
        s = (sum(vecs[i][0] for i in p), sum(vecs[i][1] for i in p))
        for i in p:
            if cross(vecs[i], s):
                return False
    total = (sum(v[0] for v in vecs), sum(v[1] for v in vecs))
    return total == (0, 0)


@dataclass
class AdmissibilityVerdict:
    status: str                      # "admissible" | "not_admissible" | "unknown"
    certificate: list | None = None  # integer vectors per line when admissible
    trace: list = field(default_factory=list)
    branches: int = 0

    @property
    def admissible(self):
        return self.status == "admissible"


def general_position_refutation(c: LineCombinatorics):
    """Refutation by splitting off two mutually transverse groups.

    Searches small core sets L0 such that the rest splits into >= 2 groups
    whose cross pairs are all double points; all non-core vectors are then
    proportional, core lines with a point meeting the rest in no other core
    line are forced proportional too, and if at most one core line stays
    unforced the global zero-sum makes every vector proportional, defeating
    the rank-two requirement.  Returns a replayable trace or None.
    """
    n = c.n
    if n < 2:
        return None
    tdeg = {i: sum(1 for p in c.triples() if i in p) for i in range(n)}
    pool = sorted(range(n), key=lambda i: (-tdeg[i], i))[:8]
    candidates = [frozenset()]
    for size in (1, 2, 3):
        candidates += [frozenset(s) for s in itertools.combinations(pool, size)]
    doubles = {frozenset(p) for p in c.doubles()}
    for core in candidates:
        rest = [i for i in range(n) if i not in core]
        if len(rest) < 2:
            continue
        # components of the graph on `rest` joining pairs that are NOT doubles
        parent = {i: i for i in rest}
        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for a, b in itertools.combinations(rest, 2):
            if frozenset((a, b)) not in doubles:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
        comps = {}
        for i in rest:
            comps.setdefault(find(i), []).append(i)
        if len(comps) < 2:
            continue
        forced = {}
        for l in core:
            hit = None
            for p in c.points:
                if l in p and len(p & core) == 1 and (p - core):
                    hit = sorted(p)
                    break
            if hit:
                forced[l] = hit
        unforced = [l for l in core if l not in forced]
        if len(unforced) <= 1:
            groups = sorted(sorted(g) for g in comps.values())
            return [("split", sorted(core), groups),
                    ("forced", dict(sorted(forced.items()))),
                    ("unforced", sorted(unforced)),
                    ("conclusion", "all vectors proportional by the global zero sum;"
                                   " no rank-two triple exists")]
    return None


class _Branch:
    """Vector store for one mode assignment: per-line symbolic plane vectors."""

    def __init__(self, c: LineCombinatorics, spread, parallel_classes, trace):
        self.c = c
        self.n = c.n
        self.spread = spread                  # list of sorted triples in spread mode
        self.parent = parallel_classes       # union-find parent list (copied)
        self.vecs: list = [None] * self.n
        self.params: dict = {}               # name -> must_be_nonzero
        self.equations: list = []
        self.nonzeros: list = []
        self.trace = list(trace)
        self.contradiction = None
        self.fresh = 0

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def new_param(self, nonzero):
        self.fresh += 1
        name = f"t{self.fresh}"
        self.params[name] = nonzero
        return Poly.var(name)

    # -- constraint handling -------------------------------------------------

    def require_zero(self, poly: Poly, why):
        if self.contradiction:
            return
        poly = self._subst_all(poly)
        if poly.is_zero():
            return
        if poly.is_const():
            self.contradiction = ("nonzero constant must vanish", why, repr(poly))
            self.trace.append(("contradiction",) + self.contradiction)
            return
        mono = poly.monomial_form()
        if mono is not None:
            coeff, vs = mono
            if all(self.params.get(v, False) for v in vs):
                self.contradiction = ("nonzero monomial must vanish", why, repr(poly))
                self.trace.append(("contradiction",) + self.contradiction)
                return
        for var in sorted(poly.variables()):
            lin = poly.linear_in(var)
            if lin is not None:
                a, b = lin
                value = b.scale(Fraction(-1) / a)
                self.substitute(var, value, why)
                return
        self.equations.append((poly, why))

    def require_nonzero(self, poly: Poly, why):
        if self.contradiction:
            return
        poly = self._subst_all(poly)
        if poly.is_zero():
            self.contradiction = ("required-nonzero quantity vanishes", why, "0")
            self.trace.append(("contradiction",) + self.contradiction)
            return
        if poly.is_const():
            return
        mono = poly.monomial_form()
        if mono is not None and all(self.params.get(v, False) for v in mono[1]):
            return
        self.nonzeros.append((poly, why))

    def substitute(self, var, value: Poly, why):
        self.trace.append(("solve", var, repr(value), why))
        if self.params.get(var, False):
            # a parameter that must stay nonzero cannot be set to zero
            if value.is_zero():
                self.contradiction = ("nonzero parameter forced to zero", why, var)
                self.trace.append(("contradiction",) + self.contradiction)
                return
        self.params.pop(var, None)
        for i, v in enumerate(self.vecs):
            if v is not None:
                self.vecs[i] = (v[0].substitute(var, value), v[1].substitute(var, value))
        eqs, self.equations = self.equations, []
        nzs, self.nonzeros = self.nonzeros, []
        self._subst_map = getattr(self, "_subst_map", {})
        self._subst_map[var] = value
        for poly, why2 in eqs:
            self.require_zero(poly.substitute(var, value), why2)
        for poly, why2 in nzs:
            self.require_nonzero(poly.substitute(var, value), why2)

    def _subst_all(self, poly: Poly) -> Poly:
        for var, value in getattr(self, "_subst_map", {}).items():
            if var in poly.variables():
                poly = poly.substitute(var, value)
        return poly

    def set_vec(self, line, vx: Poly, vy: Poly, why):
        vx, vy = self._subst_all(vx), self._subst_all(vy)
        if vx.is_const() and vy.is_const() and vx.const_value() == 0 and vy.const_value() == 0:
            self.contradiction = ("line vector forced to zero", why, line)
            self.trace.append(("contradiction",) + self.contradiction)
            return
        self.vecs[line] = (vx, vy)
        self.trace.append(("assign", line, repr(vx), repr(vy), why))


def _cross(u, v) -> Poly:
    return u[0] * v[1] - u[1] * v[0]


def _propagate(br: _Branch) -> None:
    """Run determinations to a fixed point."""
    c = br.c
    changed = True
    while changed and not br.contradiction:
        changed = False
        # sum-zero triples with exactly one unknown member
        for t in br.spread:
            known = [i for i in t if br.vecs[i] is not None]
            if len(known) == 2 and not br.contradiction:
                missing = next(i for i in t if br.vecs[i] is None)
                sx = Poly()
                sy = Poly()
                for i in known:
                    sx = sx + br.vecs[i][0]
                    sy = sy + br.vecs[i][1]
                br.set_vec(missing, -sx, -sy, ("sum-zero", tuple(t)))
                changed = True
        # class propagation: unknown line proportional to a known one
        for line in range(br.n):
            if br.vecs[line] is not None or br.contradiction:
                continue
            root = br.find(line)
            donor = next((i for i in range(br.n)
                          if br.find(i) == root and br.vecs[i] is not None), None)
            if donor is not None:
                tparam = br.new_param(nonzero=True)
                br.set_vec(line, tparam * br.vecs[donor][0], tparam * br.vecs[donor][1],
                           ("proportional-to", donor))
                changed = True
        if changed:
            continue
        # fully known sum-zero triples: enforce the vanishing sum
        for t in br.spread:
            if br.contradiction:
                break
            if all(br.vecs[i] is not None for i in t):
                sx = Poly()
                sy = Poly()
                for i in t:
                    sx = sx + br.vecs[i][0]
                    sy = sy + br.vecs[i][1]
                sx, sy = br._subst_all(sx), br._subst_all(sy)
                if not sx.is_zero() or not sy.is_zero():
                    before = len(br.equations)
                    br.require_zero(sx, ("triple-sum", tuple(t)))
                    br.require_zero(sy, ("triple-sum", tuple(t)))
                    if len(br.equations) == before:
                        changed = True
        # same-class known pairs must be proportional
        roots = {}
        for i in range(br.n):
            if br.vecs[i] is not None:
                roots.setdefault(br.find(i), []).append(i)
        for group in roots.values():
            for a, b in itertools.combinations(group, 2):
                if br.contradiction:
                    break
                x = _cross(br.vecs[a], br.vecs[b])
                x = br._subst_all(x)
                if not x.is_zero():
                    before = len(br.equations)
                    br.require_zero(x, ("proportionality", a, b))
                    if len(br.equations) == before:
                        changed = True


_CERT_VALUES = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
                Fraction(3), Fraction(-3), Fraction(1, 2), Fraction(-1, 2)]


def _extract_certificate(br: _Branch, budget=30000):
    """Instantiate remaining parameters and validate against the definition."""
    c = br.c
    for line in range(br.n):
        if br.vecs[line] is None:
            px = br.new_param(nonzero=False)
            py = br.new_param(nonzero=False)
            br.set_vec(line, px, py, ("free", line))
    params = sorted({v for vec in br.vecs for coord in vec for v in coord.variables()})
    if not params:
        assigns = [dict()]
    else:
        if len(params) > 6:
            values = _CERT_VALUES[:3]
        else:
            values = _CERT_VALUES
        assigns = ({p: v for p, v in zip(params, combo)}
                   for combo in itertools.product(values, repeat=len(params)))
    tried = 0
    for assign in assigns:
        tried += 1
        if tried > budget:
            break
        try:
            vecs = [(v[0].evaluate(assign), v[1].evaluate(assign)) for v in br.vecs]
        except ZeroDivisionError:  # pragma: no cover
            continue
        den = 1
        for (x, y) in vecs:
            den = den * x.denominator // _gcd(den, x.denominator)
            den = den * y.denominator // _gcd(den, y.denominator)
        ints = [(int(x * den), int(y * den)) for (x, y) in vecs]
        if check_3_admissible_certificate(c, ints):
            return ints
    return None


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def decide_3_admissible(c: LineCombinatorics) -> AdmissibilityVerdict:
    """Three-valued decision with certificates and replayable traces."""
    if c.n > 13:
        raise ValueError("line count exceeds the decision bound (13)")
    if c.max_multiplicity() > 3:
        raise ValueError("only double and triple points are supported")
    if validate(c):
        raise ValueError("invalid combinatorics")
    trips = [tuple(sorted(p)) for p in c.triples()]
    if not trips:
        return AdmissibilityVerdict("not_admissible",
                                    trace=[("conclusion", "no triple point: the rank-two"
                                            " requirement cannot be met")],
                                    branches=0)
    gp = general_position_refutation(c)
    if gp is not None:
        return AdmissibilityVerdict("not_admissible",
                                    trace=[("general-position",)] + gp, branches=0)

    doubles = [tuple(sorted(p)) for p in c.doubles()]
    base_parent = list(range(c.n))

    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(parent, a, b):
        ra, rb = find(parent, a), find(parent, b)
        if ra != rb:
            parent[rb] = ra
            return True
        return False

    for (a, b) in doubles:
        union(base_parent, a, b)

    branches = []           # (spread list, parent, trace)
    counter = [0]

    def assign_modes(idx_state):
        spread, parallel, parent, trace, remaining = idx_state
        # forced parallels: undecided triple with a repeated class
        work = True
        remaining = list(remaining)
        parent = parent[:]
        trace = list(trace)
        while work:
            work = False
            for t in list(remaining):
                roots = {find(parent, x) for x in t}
                if len(roots) < 3:
                    remaining.remove(t)
                    for x in t[1:]:
                        union(parent, t[0], x)
                    trace.append(("forced-parallel", t))
                    work = True
        if not remaining:
            if not spread:
                branches.append((None, parent,
                                 trace + [("conclusion", "every triple parallel:"
                                           " no rank-two triple")]))
            else:
                branches.append((list(spread), parent, trace))
            return
        t = remaining[0]
        rest = remaining[1:]
        # spread branch
        assign_modes((spread + [t], parallel, parent,
                      trace + [("mode", t, "spread")], rest))
        # parallel branch
        p2 = parent[:]
        for x in t[1:]:
            union(p2, t[0], x)
        assign_modes((spread, parallel + [t], p2,
                      trace + [("mode", t, "parallel")], rest))

    assign_modes(([], [], base_parent, [], sorted(trips)))

    refutation_traces = []
    unknown = False
    for spread, parent, trace in branches:
        counter[0] += 1
        if spread is None:
            refutation_traces.append(trace)
            continue
        br = _Branch(c, spread, parent[:], trace)
        # normalize the first spread triple: GL2 sends two independent
        # members to the unit vectors, the zero sum fixes the third
        t0 = spread[0]
        br.trace.append(("normalize", t0))
        br.set_vec(t0[0], Poly.const(1), Poly.const(0), ("normalization", t0))
        br.set_vec(t0[1], Poly.const(0), Poly.const(1), ("normalization", t0))
        br.set_vec(t0[2], Poly.const(-1), Poly.const(-1), ("normalization", t0))
        # rank-two requirements across the spread triples
        _propagate(br)
        rounds = 0
        while not br.contradiction and rounds < 50:
            rounds += 1
            before = (len(br.equations), sum(v is not None for v in br.vecs))
            # global zero sum once everything is known
            if all(v is not None for v in br.vecs):
                sx = Poly()
                sy = Poly()
                for v in br.vecs:
                    sx = sx + v[0]
                    sy = sy + v[1]
                br.require_zero(br._subst_all(sx), ("global-sum",))
                br.require_zero(br._subst_all(sy), ("global-sum",))
            # spread triples need pairwise independent members
            for t in spread:
                if all(br.vecs[i] is not None for i in t):
                    for a, b in itertools.combinations(t, 2):
                        br.require_nonzero(_cross(br.vecs[a], br.vecs[b]),
                                           ("rank-two", t, a, b))
            _propagate(br)
            after = (len(br.equations), sum(v is not None for v in br.vecs))
            if before == after:
                break
        if br.contradiction:
            refutation_traces.append(br.trace)
            continue
        cert = _extract_certificate(br)
        if cert is not None:
            return AdmissibilityVerdict("admissible", certificate=cert,
                                        trace=br.trace, branches=counter[0])
        unknown = True
    if unknown:
        return AdmissibilityVerdict("unknown", branches=counter[0])
    trace = max(refutation_traces, key=len) if refutation_traces else []
    return AdmissibilityVerdict("not_admissible", trace=trace, branches=counter[0])


# ---------------------------------------------------------------------------
# pointwise sweep
# ---------------------------------------------------------------------------


@dataclass
class PointwiseReport:
    passed: bool
    bad_subsets: list
    unknown_subsets: list
    checked: int
    cache_hits: int


def _iso_fingerprint(c: LineCombinatorics):
    prof = tuple(sorted(tuple(sorted(len(p) for p in c.points_through(i)))
                        for i in range(c.n)))
    sizes = tuple(sorted(len(p) for p in c.points))
    return (c.n, sizes, prof)


def _is_m3(c: LineCombinatorics) -> bool:
    return c.n == 3 and c.points == frozenset({frozenset({0, 1, 2})})


def pointwise_3_admissible(c: LineCombinatorics, jobs: int = 1) -> PointwiseReport:
    """Sweep all line subsets of size >= 3; pass iff every 3-admissible
    induced subcombinatorics is the plain triple point and no verdict is
    unknown.  Verdicts are cached by isomorphism class."""
    if c.n > 13:
        raise ValueError("line count exceeds the sweep bound (13)")
    cache = {}          # fingerprint -> list of (comb, verdict_status)
    bad = []
    unknown = []
    checked = 0
    hits = 0
    for size in range(3, c.n + 1):
        for subset in itertools.combinations(range(c.n), size):
            sub = subcombinatorics(c, subset).comb
            if not sub.triples():
                continue  # no rank-two triple can exist
            checked += 1
            fp = _iso_fingerprint(sub)
            status = None
            for other, st in cache.get(fp, ()):
                if is_isomorphic(sub, other) is not None:
                    status = st
                    hits += 1
                    break
            if status is None:
                verdict = decide_3_admissible(sub)
                status = verdict.status
                cache.setdefault(fp, []).append((sub, status))
            if status == "admissible" and not _is_m3(sub):
                bad.append(subset)
            elif status == "unknown":
                unknown.append(subset)
    return PointwiseReport(passed=not bad and not unknown,
                           bad_subsets=bad, unknown_subsets=unknown,
                           checked=checked, cache_hits=hits)


# ---------------------------------------------------------------------------
# candidate permutations of the triple points
# ---------------------------------------------------------------------------


@dataclass
class Psi3Candidate:
    mapping: tuple        # index permutation of the sorted triple-point list
    from_automorphism: bool


def psi3_candidates(c: LineCombinatorics):
    """Permutations of the triple points preserving the genuine-triangle
    hypergraph, each marked whether an automorphism of the combinatorics
    induces it.

    Genuine triangles (three pairwise-distinct shared lines) are the
    constraint justified for arbitrary homology automorphisms; sharing-graph
    preservation in full is not imposed, which can only enlarge the candidate
    set (safe direction).
    """
    trips = [frozenset(p) for p in sorted(c.triples(), key=sorted)]
    nt = len(trips)
    if nt <= 1:
        raise ValueError("need at least two triple points")
    index = {t: i for i, t in enumerate(trips)}
    genuine = set()
    for t in triangles(c):
        if t.genuine:
            genuine.add(frozenset(index[p] for p in t.points))
    gcount = [sum(1 for g in genuine if i in g) for i in range(nt)]
    gset = {}
    for g in genuine:
        for a, b in itertools.permutations(g, 2):
            gset.setdefault((a, b), set()).add(next(iter(g - {a, b})))

    def gs(a, b):
        return gset.get((a, b), set())

    order = [max(range(nt), key=lambda i: (gcount[i], i))]
    rest = set(range(nt)) - set(order)
    while rest:
        nxt = max(rest, key=lambda v: (sum(1 for u in order if gs(v, u)), -v))
        order.append(nxt)
        rest.discard(nxt)

    out = []
    per = [None] * nt
    used = [False] * nt

    def rec(k):
        if k == nt:
            for g in genuine:
                if frozenset(per[x] for x in g) not in genuine:
                    return
            out.append(tuple(per))
            return
        i = order[k]
        for j in range(nt):
            if used[j] or gcount[j] != gcount[i]:
                continue
            ok = True
            for k2 in range(k):
                i2 = order[k2]
                s1 = gs(i, i2)
                s2 = gs(j, per[i2])
                if len(s1) != len(s2):
                    ok = False
                    break
                for k3 in range(k2):
                    i3 = order[k3]
                    if (i3 in s1) != (per[i3] in s2):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            per[i] = j
            used[j] = True
            rec(k + 1)
            per[i] = None
            used[j] = False

    rec(0)
    auts = automorphism_group(c)
    aut_perms = {tuple(index[frozenset(g.perm[x] for x in trips[i])] for i in range(nt))
                 for g in auts}
    return [Psi3Candidate(mapping=m, from_automorphism=m in aut_perms)
            for m in sorted(out)], trips


# ---------------------------------------------------------------------------
# rank obstruction for candidates
# ---------------------------------------------------------------------------


@dataclass
class ObstructionOutcome:
    status: str               # "obstructed" | "unresolved"
    certified_bound: int | None = None
    bound_witness: tuple | None = None
    trial_ranks: list = field(default_factory=list)


def _column_classes(c: LineCombinatorics, trips, sigma):
    """Per column i: partition of the rows merged by every triple point P with
    i not in sigma(P) (the column must be constant on the rows of P)."""
    n = c.n
    classes = []
    for i in range(n):
        parent = list(range(n))
        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for ti, t in enumerate(trips):
            if i not in trips[sigma[ti]]:
                rows = sorted(t)
                for a in rows[1:]:
                    ra, rb = find(rows[0]), find(a)
                    if ra != rb:
                        parent[rb] = ra
        groups = {}
        for x in range(n):
            groups.setdefault(find(x), []).append(x)
        classes.append(sorted(groups.values()))
    return classes


def _exact_rank_int(rows) -> int:
    """Exact rank of a small integer matrix over Q."""
    rows = [list(map(Fraction, r)) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def obstruct_psi3(c: LineCombinatorics, sigma, seed: int = 0,
                  trips=None) -> ObstructionOutcome:
    """Certified rank bound for the matrix family forced by a candidate.

    Columns not moved onto a triple must be constant on its rows; each column
    therefore lives in the span of its row-class indicators.  For any subset T
    of columns (the all-ones column included), the rank of any family member is
    at most (#columns - |T|) + dim span(indicators over T): evaluating this
    exactly over a deterministic family of subsets plus the row-refinement
    bound yields a certified upper bound valid for every specialization.
    Seeded random specializations provide the agreeing lower bound.
    """
    if trips is None:
        trips = [frozenset(p) for p in sorted(c.triples(), key=sorted)]
    n = c.n
    classes = _column_classes(c, trips, sigma)
    gens = [[tuple(1 if r in cl else 0 for r in range(n)) for cl in classes[i]]
            for i in range(n)]
    gens.append([tuple([1] * n)])  # the all-ones column
    ncols = n + 1
    dims = [len(g) for g in gens]
    best = min(n, ncols)
    witness = None
    for d in sorted(set(dims)):
        T = [i for i in range(ncols) if dims[i] <= d]
        if not T:
            continue
        rows = []
        for i in T:
            rows.extend(gens[i])
        bound = ncols - len(T) + _exact_rank_int(rows)
        if bound < best:
            best = bound
            witness = ("column-subset", tuple(T))
    cells = {}
    for r in range(n):
        key = tuple(next(ci for ci, cl in enumerate(classes[i]) if r in cl)
                    for i in range(n))
        cells.setdefault(key, []).append(r)
    if len(cells) < best:
        best = len(cells)
        witness = ("row-refinement", len(cells))

    # seeded random members: directions = class indicators over the ones column
    dirs = []
    for i in range(n):
        for cl in classes[i]:
            m = [[0] * ncols for _ in range(n)]
            for r in cl:
                m[r][i] = 1
            dirs.append(IntMatrix(m))
    ones = [[0] * ncols for _ in range(n)]
    for r in range(n):
        ones[r][n] = 1
    rep = generic_rank(IntMatrix(ones), dirs, seed=seed, trials=8)
    obstructed = best < n and rep.lower <= best
    return ObstructionOutcome(
        status="obstructed" if obstructed else "unresolved",
        certified_bound=best,
        bound_witness=witness,
        trial_ranks=rep.trial_ranks,
    )


# ---------------------------------------------------------------------------
# witness search for non-rigid combinatorics
# ---------------------------------------------------------------------------


def _search_witness(c: LineCombinatorics, trips, sigma, values=(0, 1, -1),
                    node_budget=2_000_000):
    """Depth-first search for an admissible invertible matrix realizing the
    candidate permutation; the largest row class of each column is pinned to
    zero (the all-ones freedom)."""
    n = c.n
    classes = _column_classes(c, trips, sigma)
    pinned = []
    freeclasses = []
    for i in range(n):
        cls = sorted(classes[i], key=lambda cl: (-len(cl), cl))
        pinned.append(cls[0])
        freeclasses.append(cls[1:])
    dbls = [sorted(p) for p in c.doubles()]
    tripl = [sorted(p) for p in c.triples()]

    entries = [[0] * n for _ in range(n)]
    nodes = [0]

    def conditions_ready(col_done):
        """Determinant conditions whose columns are all assigned."""
        conds = []
        for (i, j, k) in tripl:
            for (u, v) in dbls:
                if u < col_done and v < col_done:
                    conds.append(("d", (i, j, k), (u, v)))
            for q in tripl:
                if all(x < col_done for x in q):
                    conds.append(("t", (i, j, k), tuple(q)))
        return conds

    cond_at = [[] for _ in range(n + 1)]
    seen = set()
    for col in range(1, n + 1):
        for cond in conditions_ready(col):
            if cond not in seen:
                seen.add(cond)
                cond_at[col].append(cond)

    def check(cond) -> bool:
        kind, (i, j, k), q = cond
        e = entries
        if kind == "d":
            u, v = q
            rows = [[e[i][u], e[i][v], 1], [e[j][u], e[j][v], 1], [e[k][u], e[k][v], 1]]
            return _det3(rows) == 0
        u, v, w = q
        for bullet in q:
            rows = [[e[i][bullet], e[i][u] + e[i][v] + e[i][w], 1],
                    [e[j][bullet], e[j][u] + e[j][v] + e[j][w], 1],
                    [e[k][bullet], e[k][u] + e[k][v] + e[k][w], 1]]
            if _det3(rows):
                return False
        return True

    def col_assign(col, vals):
        for cl, v in zip(freeclasses[col], vals):
            for r in cl:
                entries[r][col] = v
        for r in pinned[col]:
            entries[r][col] = 0

    def dfs(col):
        nodes[0] += 1
        if nodes[0] > node_budget:
            return None
        if col == n:
            hm = HomologyMatrix([row[:] for row in entries])
            if not hm.is_invertible():
                return None
            if not check_admissibility(hm, c):
                return None
            # the candidate must be realized exactly
            for ti, t in enumerate(trips):
                img = adm_subcombinatorics(hm, t, c)
                if frozenset(img.index_map) != trips[sigma[ti]]:
                    return None
            return hm
        for vals in itertools.product(values, repeat=len(freeclasses[col])):
            col_assign(col, vals)
            if all(check(cond) for cond in cond_at[col + 1]):
                got = dfs(col + 1)
                if got is not None:
                    return got
        for r in range(n):
            entries[r][col] = 0
        return None

    return dfs(0)


# ---------------------------------------------------------------------------
# the rigidity verdict
# ---------------------------------------------------------------------------


def diagonal_equality_derivable(c: LineCombinatorics) -> bool:
    """Re-derive, per triple point, that the same-triple determinant conditions
    force equal diagonal entries for an invertible diagonal matrix: each
    condition evaluates to +-d_x (d_y - d_z); two unequal entries force the
    third to vanish, contradicting invertibility."""
    for p in c.triples():
        i, j, k = sorted(p)
        d = {x: Poly.var(f"d{x}") for x in (i, j, k)}
        zero = Poly.const(0)
        one = Poly.const(1)
        prods = []
        for bullet in (i, j, k):
            rows = []
            for row_line in (i, j, k):
                first = d[row_line] if row_line == bullet else zero
                second = d[row_line]
                rows.append((first, second, one))
            (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = rows
            det = (a1 * (b2 * c3 - b3 * c2) - b1 * (a2 * c3 - a3 * c2)
                   + c1 * (a2 * b3 - a3 * b2))
            prods.append(det)
        expected = {
            repr(d[i] * (d[j] - d[k])), repr(-(d[i] * (d[j] - d[k]))),
            repr(d[j] * (d[i] - d[k])), repr(-(d[j] * (d[i] - d[k]))),
            repr(d[k] * (d[i] - d[j])), repr(-(d[k] * (d[i] - d[j]))),
        }
        for det in prods:
            if repr(det) not in expected:
                return False
    return True


@dataclass
class RigidityReport:
    verdict: str                       # "rigid" | "not_rigid" | "inconclusive"
    pointwise: PointwiseReport | None
    candidates: int = 0
    from_aut: int = 0
    obstructed: int = 0
    unresolved: list = field(default_factory=list)
    witness: HomologyMatrix | None = None
    identity_checks: dict = field(default_factory=dict)
    detail: str = ""


def rigidity_verdict(c: LineCombinatorics, seed: int = 0,
                     search_witness: bool = True) -> RigidityReport:
    """Full pipeline: pointwise sweep, candidate enumeration, automorphism
    marking, certified rank obstruction, identity-case structural checks."""
    if c.max_multiplicity() > 3:
        raise ValueError("only double and triple points are supported")
    if len(c.triples()) <= 1:
        return RigidityReport(verdict="inconclusive", pointwise=None,
                              detail="fewer than two triple points")
    pw = pointwise_3_admissible(c)
    if not pw.passed:
        return RigidityReport(verdict="inconclusive", pointwise=pw,
                              detail="pointwise sweep failed or returned unknown")
    cands, trips = psi3_candidates(c)
    identity = tuple(range(len(trips)))
    conn = connectivity_checks(c)
    diag_ok = diagonal_equality_derivable(c)
    id_ok = conn.triple_chain_connected and conn.off_column_coverage and diag_ok
    identity_checks = {
        "triple_chain_connected": conn.triple_chain_connected,
        "off_column_coverage": conn.off_column_coverage,
        "diagonal_equality_derivable": diag_ok,
    }
    obstructed = 0
    unresolved = []
    witness = None
    coset_cache = {}
    aut_maps = {cd.mapping for cd in cands if cd.from_automorphism}
    for cd in cands:
        if cd.from_automorphism:
            continue
        # left composition with automorphism-induced permutations preserves
        # the obstruction status; cache per coset
        coset = min(tuple(a[cd.mapping[i]] for i in range(len(trips)))
                    for a in aut_maps)
        if coset in coset_cache:
            st = coset_cache[coset]
        else:
            out = obstruct_psi3(c, cd.mapping, seed=seed, trips=trips)
            st = out.status
            coset_cache[coset] = st
        if st == "obstructed":
            obstructed += 1
        else:
            unresolved.append(cd.mapping)
    if unresolved:
        if search_witness:
            for sigma in unresolved:
                got = _search_witness(c, trips, sigma)
                if got is not None:
                    witness = got
                    return RigidityReport(
                        verdict="not_rigid", pointwise=pw, candidates=len(cands),
                        from_aut=len([x for x in cands if x.from_automorphism]),
                        obstructed=obstructed, unresolved=unresolved,
                        witness=witness, identity_checks=identity_checks,
                        detail="admissible non-automorphic matrix found")
        return RigidityReport(verdict="inconclusive", pointwise=pw,
                              candidates=len(cands),
                              from_aut=len([x for x in cands if x.from_automorphism]),
                              obstructed=obstructed, unresolved=unresolved,
                              identity_checks=identity_checks,
                              detail="unresolved candidates without witness")
    if not id_ok:
        return RigidityReport(verdict="inconclusive", pointwise=pw,
                              candidates=len(cands),
                              from_aut=len([x for x in cands if x.from_automorphism]),
                              obstructed=obstructed,
                              identity_checks=identity_checks,
                              detail="identity-case structural checks failed")
    return RigidityReport(verdict="rigid", pointwise=pw, candidates=len(cands),
                          from_aut=len([x for x in cands if x.from_automorphism]),
                          obstructed=obstructed, identity_checks=identity_checks,
                          detail="all candidates discharged")
