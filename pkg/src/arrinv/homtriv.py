"""Level-2 obstruction systems for homology-trivial isomorphisms.

Given matched presentations of two arrangements with the same labeled
combinatorics, a candidate isomorphism sending each generator x_i to
x_i * alpha_i is determined at level 2 by integer coefficients p^k_{uv}
(the degree-0 class of alpha_k).  Each matched relation pair imposes that a
specific degree-1 class lands in the combinatorial degree-1 relation lattice;
projecting to the free degree-1 quotient turns this into an integer linear
system whose exact solvability over Z (and over Q, with dimensions) is decided
by the solvers in `exact`.  Integral infeasibility certifies that no
homology-trivial isomorphism exists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .alexander import graded_quotients, gr1_relation_rows, reduce_word
from .combinatorics import LineCombinatorics
from .exact.matrix import IntMatrix, solve_linear_system
from .presentation import ZariskiPresentation, verify_zariski


@dataclass
class ObstructionSystem:
    """Reduced integer system A p = b over the alpha-coefficient variables.

    variables[v] = (k, (u, v)): coefficient of the pair class (u,v) in alpha_k.
    Rows are tagged by (relation index, free degree-1 quotient coordinate);
    zero rows are dropped and counted.  The raw per-relation data (degree-0
    vector, degree-1 difference) is retained so witnesses can be re-verified
    against the unprojected lattice-membership conditions, and the degree-1
    relation lattice itself is available as a column matrix.
    """
    comb: LineCombinatorics
    variables: list
    A: IntMatrix
    b: list
    row_tags: list
    dropped_zero_rows: int
    raw_deg0: list            # per relation: degree-0 coefficient vector
    raw_deg1_diff: list       # per relation: deg1(reduce A_i) - deg1(reduce B_i)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def appearing(self):
        """Indices of variables with a nonzero column."""
        cols = set()
        for row in self.A.entries:
            for v, x in enumerate(row):
                if x and v not in cols:
                    cols.add(v)
        return sorted(cols)

    def lattice_matrix(self) -> IntMatrix:
        """Degree-1 relation lattice generators as columns."""
        rows, _ = gr1_relation_rows(self.comb)
        return IntMatrix(rows).transpose()


def build_system(pA: ZariskiPresentation, pB: ZariskiPresentation,
                 c: LineCombinatorics) -> ObstructionSystem:
    """Assemble the reduced obstruction system for matched presentations."""
    if pA.tags != pB.tags:
        raise ValueError("presentations are not matched (tags differ)")
    for p in (pA, pB):
        rep = verify_zariski(p, c)
        if not rep.ok:
            raise ValueError("presentation check failed: " + "; ".join(rep.failures))
    gq = graded_quotients(c)
    idx = gq.idx
    r, npairs, g1 = gq.r, idx.npairs, gq.g1
    nvars = r * npairs
    variables = [(k, pair) for k in range(1, r + 1) for pair in idx.pairs]

    rows = []
    rhs = []
    tags = []
    dropped = 0
    raw_deg0 = []
    raw_deg1 = []
    for i, (wa, wb) in enumerate(zip(pA.relations, pB.relations)):
        ca = reduce_word(wa, r)
        cb = reduce_word(wb, r)
        if ca.deg0 != cb.deg0:
            raise ValueError(f"degree-0 classes of matched relations {i} differ")
        raw_deg0.append(list(ca.deg0))
        raw_deg1.append([x - y for x, y in zip(ca.deg1, cb.deg1)])
        # correction columns: coefficient c_{uv} contributes, for every pair
        # (s,t), +c to variable p^v_{st} at coordinate (u;s,t) and -c to
        # p^u_{st} at coordinate (v;s,t)
        cols = {}
        for pi, cc in enumerate(ca.deg0):
            if not cc:
                continue
            u, v = idx.pairs[pi]
            for st in range(npairs):
                col = cols.setdefault((v - 1) * npairs + st, [0] * (r * npairs))
                col[(u - 1) * npairs + st] += cc
                col = cols.setdefault((u - 1) * npairs + st, [0] * (r * npairs))
                col[(v - 1) * npairs + st] -= cc
        qcols = {var: gq.project_deg1(vec) for var, vec in cols.items()}
        qb = gq.project_deg1([y - x for x, y in zip(ca.deg1, cb.deg1)])
        for coord in range(g1):
            row = [0] * nvars
            nz = False
            for var, qc in qcols.items():
                if qc[coord]:
                    row[var] = qc[coord]
                    nz = True
            if nz or qb[coord]:
                rows.append(row)
                rhs.append(qb[coord])
                tags.append((i, coord))
            else:
                dropped += 1
    return ObstructionSystem(
        comb=c,
        variables=variables,
        A=IntMatrix(rows) if rows else IntMatrix.zero(0, nvars),
        b=rhs,
        row_tags=tags,
        dropped_zero_rows=dropped,
        raw_deg0=raw_deg0,
        raw_deg1_diff=raw_deg1,
    )


@dataclass
class HomTrivVerdict:
    """Solvability report of an obstruction system.

    `dimension_full` counts all alpha-coefficient variables,
    `dimension_appearing` only those appearing with a nonzero column; both are
    affine dimensions of the rational solution set in the respective
    coordinate counts (None when rationally infeasible).
    """
    rational_feasible: bool
    integer_feasible: bool
    rank: int
    n_vars: int
    n_appearing: int
    dimension_full: int | None
    dimension_appearing: int | None
    obstructing_primes: frozenset
    witness: list | None
    dropped_zero_rows: int = 0
    rows: int = 0

    def to_json(self) -> dict:
        return {
            "rational_feasible": self.rational_feasible,
            "integer_feasible": self.integer_feasible,
            "rank": self.rank,
            "n_vars": self.n_vars,
            "n_appearing": self.n_appearing,
            "dimension_full": self.dimension_full,
            "dimension_appearing": self.dimension_appearing,
            "obstructing_primes": sorted(self.obstructing_primes),
            "witness": self.witness,
            "dropped_zero_rows": self.dropped_zero_rows,
            "rows": self.rows,
        }


def solve(sys: ObstructionSystem) -> HomTrivVerdict:
    """Exact rational/integer verdict for the obstruction system."""
    rep = solve_linear_system(sys.A.entries, sys.b)
    appearing = len(sys.appearing)
    dim_full = sys.n_vars - rep.rank if rep.rational_feasible else None
    dim_app = appearing - rep.rank if rep.rational_feasible else None
    return HomTrivVerdict(
        rational_feasible=rep.rational_feasible,
        integer_feasible=rep.integer_feasible,
        rank=rep.rank,
        n_vars=sys.n_vars,
        n_appearing=appearing,
        dimension_full=dim_full,
        dimension_appearing=dim_app,
        obstructing_primes=rep.obstructing_primes,
        witness=rep.witness,
        dropped_zero_rows=sys.dropped_zero_rows,
        rows=sys.A.rows,
    )


def verify_witness(sys: ObstructionSystem, p) -> bool:
    """Substitute p and check every relation's obstruction class lands in the
    degree-1 relation lattice, via the exact quotient coordinates (whose
    kernel is the lattice)."""
    gq = graded_quotients(sys.comb)
    idx = gq.idx
    r, npairs = gq.r, idx.npairs
    if len(p) != r * npairs:
        raise ValueError("witness length mismatch")
    for c_vec, d1 in zip(sys.raw_deg0, sys.raw_deg1_diff):
        e = list(d1)
        for pi, cc in enumerate(c_vec):
            if not cc:
                continue
            u, v = idx.pairs[pi]
            for st in range(npairs):
                pv = p[(v - 1) * npairs + st]
                if pv:
                    e[(u - 1) * npairs + st] += cc * pv
                pu = p[(u - 1) * npairs + st]
                if pu:
                    e[(v - 1) * npairs + st] -= cc * pu
        if not gq.deg1_in_lattice(e):
            return False
    return True
