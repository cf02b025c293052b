"""Level-2 truncated commutator invariants.

Words in the commutator subgroup of a free group F on x_1..x_r are reduced to
canonical module coordinates: an integer coefficient per basis class x_{ij}
(the class of [x_i, x_j]) and per (t_k - 1) x_{ij}.  Coefficients live in the
group ring truncated at degree 2 in the augmentation ideal.  On top of the
reduction sit the combinatorially-determined graded quotients of arrangement
modules (degree 0 and degree 1) and the rank of the full level-2 module of a
presentation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

from .combinatorics import LineCombinatorics, multiplicity, validate
from .exact.lattice import column_reduce, ColumnReduction
from .exact.matrix import IntMatrix, smith_normal_form


class Lambda2Coeff:
    """Element of Z[t_1^{+-1},..,t_r^{+-1}] / m^2: constant + linear part."""

    __slots__ = ("const", "lin")

    def __init__(self, const=0, lin=None):
        self.const = int(const)
        self.lin = {k: v for k, v in (lin or {}).items() if v}

    @classmethod
    def t_power(cls, exponents):
        """t^v mod m^2 = 1 + sum v_k (t_k - 1); exponents: dict k -> int."""
        return cls(1, dict(exponents))

    def __add__(self, other):
        lin = dict(self.lin)
        for k, v in other.lin.items():
            lin[k] = lin.get(k, 0) + v
        return Lambda2Coeff(self.const + other.const, lin)

    def __neg__(self):
        return Lambda2Coeff(-self.const, {k: -v for k, v in self.lin.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        lin = {k: other.const * v for k, v in self.lin.items()}
        for k, v in other.lin.items():
            lin[k] = lin.get(k, 0) + self.const * v
        return Lambda2Coeff(self.const * other.const, lin)

    def is_unit(self) -> bool:
        return self.const in (1, -1)

    def inverse(self) -> "Lambda2Coeff":
        if not self.is_unit():
            raise ValueError("not a unit at truncation level 2")
        return Lambda2Coeff(self.const, {k: -v for k, v in self.lin.items()})

    def augmentation(self) -> int:
        return self.const

    def __eq__(self, other):
        return (isinstance(other, Lambda2Coeff) and self.const == other.const
                and self.lin == other.lin)

    def __repr__(self):
        return f"Lambda2Coeff({self.const}, {self.lin})"


class PairIndexer:
    """Flat indexing of pairs (i, j), 1 <= i < j <= r."""

    def __init__(self, r: int):
        self.r = r
        self.pairs = [(i, j) for i in range(1, r + 1) for j in range(i + 1, r + 1)]
        self.index = {p: k for k, p in enumerate(self.pairs)}
        self.npairs = len(self.pairs)

    def flat(self, k, i, j):
        """Index of (t_k - 1) x_{ij} in the degree-1 coordinate block."""
        return (k - 1) * self.npairs + self.index[(i, j)]


class TruncatedClass:
    """Module element: deg0 coefficients on x_{ij}, deg1 on (t_k-1) x_{ij}.

    Degree-1 coordinates of the same class are only well defined modulo the
    degree-1 relation lattice of the ambient free construction; compare
    classes through `canonical_form`.
    """

    __slots__ = ("r", "deg0", "deg1")

    def __init__(self, r, deg0=None, deg1=None):
        self.r = r
        npairs = r * (r - 1) // 2
        self.deg0 = list(deg0) if deg0 is not None else [0] * npairs
        self.deg1 = list(deg1) if deg1 is not None else [0] * (r * npairs)

    def __add__(self, other):
        return TruncatedClass(self.r,
                              [a + b for a, b in zip(self.deg0, other.deg0)],
                              [a + b for a, b in zip(self.deg1, other.deg1)])

    def __sub__(self, other):
        return TruncatedClass(self.r,
                              [a - b for a, b in zip(self.deg0, other.deg0)],
                              [a - b for a, b in zip(self.deg1, other.deg1)])

    def __neg__(self):
        return TruncatedClass(self.r, [-a for a in self.deg0], [-a for a in self.deg1])

    def scale(self, coeff: Lambda2Coeff) -> "TruncatedClass":
        """Multiply by a truncated ring element (degree-2 terms vanish)."""
        npairs = len(self.deg0)
        deg0 = [coeff.const * a for a in self.deg0]
        deg1 = [coeff.const * a for a in self.deg1]
        for k, v in coeff.lin.items():
            base = (k - 1) * npairs
            for p, a in enumerate(self.deg0):
                if a:
                    deg1[base + p] += v * a
        return TruncatedClass(self.r, deg0, deg1)

    def is_zero_raw(self) -> bool:
        return not any(self.deg0) and not any(self.deg1)

    def to_json(self) -> str:
        idx = PairIndexer(self.r)
        d0 = {f"{i},{j}": self.deg0[idx.index[(i, j)]]
              for (i, j) in idx.pairs if self.deg0[idx.index[(i, j)]]}
        d1 = {}
        for k in range(1, self.r + 1):
            for (i, j) in idx.pairs:
                v = self.deg1[idx.flat(k, i, j)]
                if v:
                    d1[f"{k};{i},{j}"] = v
        return json.dumps({"r": self.r, "deg0": d0, "deg1": d1}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "TruncatedClass":
        d = json.loads(text)
        r = d["r"]
        idx = PairIndexer(r)
        out = cls(r)
        for key, v in d["deg0"].items():
            i, j = map(int, key.split(","))
            out.deg0[idx.index[(i, j)]] = v
        for key, v in d["deg1"].items():
            k, pair = key.split(";")
            i, j = map(int, pair.split(","))
            out.deg1[idx.flat(int(k), i, j)] = v
        return out


def reduce_word(word, r, order=None) -> TruncatedClass:
    """Class of a commutator-subgroup word in the level-2 truncated module.

    Left-to-right collection toward the canonical ordered product of generator
    powers; `order` is the target generator ordering (default 1..r).  Any
    ordering yields the same class modulo the degree-1 Jacobi lattice.
    """
    if order is None:
        order = list(range(1, r + 1))
    pos = {g: s for s, g in enumerate(order)}
    idx = _indexer(r)
    pidx = idx.index
    npairs = idx.npairs
    e = [0] * (r + 1)
    deg0 = [0] * npairs
    deg1 = [0] * (r * npairs)
    # tail generators in decreasing canonical position, precomputed per letter
    tail = {g: [h for h in sorted(order, key=lambda x: -pos[x]) if pos[h] > pos[g]]
            for g in order}
    for letter in word:
        k = abs(letter)
        if not 1 <= k <= r:
            raise ValueError(f"generator {k} out of range 1..{r}")
        eps = 1 if letter > 0 else -1
        eta = -eps
        # class([A^-1, x_k^eta]) for A = ordered tail beyond k's slot
        Tlin = {}
        local0 = {}
        local1 = {}
        for j in tail[k]:
            a = -e[j]
            if a:
                qc = a
                ql = a * (a - 1) // 2
                if j < k:
                    pi = pidx[(j, k)]
                    s = eta
                else:
                    pi = pidx[(k, j)]
                    s = -eta
                local0[pi] = local0.get(pi, 0) + s * qc
                for l, cl in Tlin.items():
                    key = (l, pi)
                    local1[key] = local1.get(key, 0) + s * qc * cl
                if ql:
                    key = (j, pi)
                    local1[key] = local1.get(key, 0) + s * ql
                if eta == -1:
                    key = (k, pi)
                    local1[key] = local1.get(key, 0) - s * qc
            if e[j]:
                Tlin[j] = Tlin.get(j, 0) - e[j]
        e[k] += eps
        # outer multiplier t^{e_after}: pushes deg0 into deg1
        for pi, c in local0.items():
            if c:
                deg0[pi] += c
                for l in range(1, r + 1):
                    if e[l]:
                        deg1[(l - 1) * npairs + pi] += e[l] * c
        for (l, pi), c in local1.items():
            if c:
                deg1[(l - 1) * npairs + pi] += c
    if any(e[1:]):
        raise ValueError("word has nonzero exponent sum (not in the commutator subgroup)")
    return TruncatedClass(r, deg0, deg1)


@lru_cache(maxsize=32)
def _indexer(r: int) -> PairIndexer:
    return PairIndexer(r)


@lru_cache(maxsize=32)
def _jacobi_reduction(r: int) -> ColumnReduction:
    idx = _indexer(r)
    vecs = [jacobi_vector(idx, i, j, k)
            for (i, j, k) in itertools.combinations(range(1, r + 1), 3)]
    return column_reduce(vecs, r * idx.npairs)


def jacobi_canonical(x: TruncatedClass):
    """Raw degree-0 part plus degree-1 coordinates reduced modulo the Jacobi
    lattice only; equal classes of the free construction have equal values."""
    red = _jacobi_reduction(x.r)
    return tuple(x.deg0), tuple(red.reduce(x.deg1))


# -- combinatorial graded quotients -------------------------------------------

def _deg0_relation_vectors(c: LineCombinatorics, idx: PairIndexer):
    """Degree-0 relation vectors of the structure deconed at line 0: one per
    double point off line 0, two per triple point off line 0."""
    vecs = []
    labels = []
    for p in sorted(c.points, key=sorted):
        if 0 in p:
            continue
        ls = sorted(p)
        if len(p) == 2:
            i, j = ls
            v = [0] * idx.npairs
            v[idx.index[(i, j)]] = 1
            vecs.append(v)
            labels.append((tuple(ls), i))
        elif len(p) == 3:
            i, j, k = ls
            v = [0] * idx.npairs
            v[idx.index[(i, j)]] = 1
            v[idx.index[(i, k)]] = 1
            vecs.append(v)
            labels.append((tuple(ls), i))
            v = [0] * idx.npairs
            v[idx.index[(i, k)]] = 1
            v[idx.index[(j, k)]] = 1
            vecs.append(v)
            labels.append((tuple(ls), j))
        else:
            raise ValueError("point of multiplicity > 3")
    return vecs, labels


def jacobi_vector(idx: PairIndexer, i, j, k):
    """(t_i-1)x_{jk} - (t_j-1)x_{ik} + (t_k-1)x_{ij} as a degree-1 vector."""
    v = [0] * (idx.r * idx.npairs)
    v[idx.flat(i, j, k)] += 1
    v[idx.flat(j, i, k)] -= 1
    v[idx.flat(k, i, j)] += 1
    return v


class GradedQuotients:
    """Exact coordinates on the degree-0 and degree-1 graded quotients of the
    level-2 module attached to a combinatorics (deconed at line 0).

    Stage one quotients the degree-0 relation span out of each (t_k-1) block;
    stage two quotients the projected Jacobi lattice.  Unit pivots in both
    stages certify that the quotients are free.
    """

    def __init__(self, c: LineCombinatorics):
        if validate(c):
            raise ValueError("invalid combinatorics")
        self.comb = c
        self.r = c.n - 1
        self.idx = _indexer(self.r)
        idx = self.idx
        self.rel0_vectors, self.rel0_labels = _deg0_relation_vectors(c, idx)
        self.red0 = column_reduce(self.rel0_vectors, idx.npairs)
        if not self.red0.unit_pivots:
            raise AssertionError("degree-0 quotient not free")
        self.g0 = self.red0.quotient_rank
        jac_images = []
        for (i, j, k) in itertools.combinations(range(1, c.n), 3):
            v = [0] * idx.npairs
            img = [0] * (self.r * self.g0)
            for (gen, pair, sign) in ((i, (j, k), 1), (j, (i, k), -1), (k, (i, j), 1)):
                vv = [0] * idx.npairs
                vv[idx.index[pair]] = sign
                q = self.red0.quotient_coords(vv)
                base = (gen - 1) * self.g0
                for t, val in enumerate(q):
                    img[base + t] += val
            if any(img):
                jac_images.append(img)
        self.red1 = column_reduce(jac_images, self.r * self.g0)
        if not self.red1.unit_pivots:
            raise AssertionError("degree-1 quotient not free")
        self.g1 = self.red1.quotient_rank

    def project_deg1(self, deg1):
        """Integer coordinates of a degree-1 vector in the free degree-1
        quotient; the kernel is exactly the degree-1 relation lattice."""
        idx = self.idx
        mid = [0] * (self.r * self.g0)
        np_ = idx.npairs
        for k in range(1, self.r + 1):
            seg = deg1[(k - 1) * np_: k * np_]
            if any(seg):
                q = self.red0.quotient_coords(seg)
                base = (k - 1) * self.g0
                for t, val in enumerate(q):
                    mid[base + t] += val
        return self.red1.quotient_coords(mid)

    def deg1_in_lattice(self, deg1) -> bool:
        return not any(self.project_deg1(deg1))


@lru_cache(maxsize=16)
def graded_quotients(c: LineCombinatorics) -> GradedQuotients:
    return GradedQuotients(c)


# -- presentations of the graded pieces ----------------------------------------

@dataclass
class ModulePresentation:
    ambient_rank: int
    relations: IntMatrix          # relations as rows
    generator_labels: list
    relation_labels: list
    rank: int
    free: bool


def gr0_presentation(c: LineCombinatorics) -> ModulePresentation:
    """Degree-0 piece: pairs x_{ij} modulo one/two relations per point."""
    gq = graded_quotients(c)
    idx = gq.idx
    factors, _, _ = smith_normal_form(IntMatrix(gq.rel0_vectors)) if gq.rel0_vectors \
        else ([], None, None)
    free = all(f == 1 for f in factors)
    rank = idx.npairs - len(factors)
    assert rank == gq.g0 and free, "graded reduction disagrees with Smith form"
    return ModulePresentation(
        ambient_rank=idx.npairs,
        relations=IntMatrix(gq.rel0_vectors) if gq.rel0_vectors else IntMatrix.zero(0, idx.npairs),
        generator_labels=[f"x[{i},{j}]" for (i, j) in idx.pairs],
        relation_labels=[str(l) for l in gq.rel0_labels],
        rank=rank,
        free=free,
    )


def gr1_relation_rows(c: LineCombinatorics):
    """Rows spanning the degree-1 relation lattice: Jacobi vectors plus the
    (t_k - 1)-multiples of every degree-0 relation."""
    gq = graded_quotients(c)
    idx = gq.idx
    rows = []
    labels = []
    for (i, j, k) in itertools.combinations(range(1, c.n), 3):
        rows.append(jacobi_vector(idx, i, j, k))
        labels.append(f"J({i},{j},{k})")
    for vec, lab in zip(gq.rel0_vectors, gq.rel0_labels):
        for k in range(1, gq.r + 1):
            row = [0] * (gq.r * idx.npairs)
            base = (k - 1) * idx.npairs
            for p, v in enumerate(vec):
                if v:
                    row[base + p] = v
            rows.append(row)
            labels.append(f"(t{k}-1)*{lab}")
    return rows, labels


def gr1_presentation(c: LineCombinatorics) -> ModulePresentation:
    """Degree-1 piece: generators (t_k-1) x_{ij}; rank via staged reduction
    (unit pivots certify freeness; cross-checked against the Smith form in
    the test suite on small inputs)."""
    gq = graded_quotients(c)
    idx = gq.idx
    rows, labels = gr1_relation_rows(c)
    gens = [f"(t{k}-1)x[{i},{j}]" for k in range(1, gq.r + 1) for (i, j) in idx.pairs]
    return ModulePresentation(
        ambient_rank=gq.r * idx.npairs,
        relations=IntMatrix(rows) if rows else IntMatrix.zero(0, gq.r * idx.npairs),
        generator_labels=gens,
        relation_labels=labels,
        rank=gq.g1,
        free=True,
    )


# -- the full level-2 module of a presentation ---------------------------------

@dataclass
class LevelTwoRanks:
    gr0: int
    gr1: int
    total: int
    torsion_free: bool


def m2_rank(c: LineCombinatorics, pres) -> LevelTwoRanks:
    """Rank of the level-2 module presented by `pres` over the combinatorics.

    The ambient module on the x_{ij} and (t_k-1)x_{ij} is divided by the
    Jacobi lattice, the reduced relation classes, and their (t_k-1)-multiples;
    after projecting degree-1 parts to the free degree-1 quotient, the
    relation classes span a sublattice whose quotient is computed exactly.
    """
    from .presentation import verify_zariski  # local import to avoid a cycle

    rep = verify_zariski(pres, c)
    if not rep.ok:
        raise ValueError("presentation fails the normal-form check: " + "; ".join(rep.failures))
    gq = graded_quotients(c)
    idx = gq.idx
    vecs = []
    for word in pres.relations:
        cls = reduce_word(word, gq.r)
        vecs.append(list(cls.deg0) + gq.project_deg1(cls.deg1))
    red = column_reduce(vecs, idx.npairs + gq.g1)
    torsion_free = red.unit_pivots
    total = idx.npairs + gq.g1 - red.rank
    return LevelTwoRanks(gr0=gq.g0, gr1=gq.g1, total=total, torsion_free=torsion_free)


def canonical_form(x: TruncatedClass, c: LineCombinatorics):
    """Reduced coordinates of a class: raw degree-0 part plus exact coordinates
    of the degree-1 part in the free degree-1 quotient.  Two classes are equal
    in the level-2 module of the free construction modulo the combinatorial
    degree-1 lattice iff their canonical forms agree."""
    gq = graded_quotients(c)
    if x.r != gq.r:
        raise ValueError("rank mismatch")
    return tuple(x.deg0), tuple(gq.project_deg1(x.deg1))
