"""Group presentations from braided wiring diagrams.

Generators are meridians of the strands at the basepoint, one per line of the
deconed arrangement; every relation is an explicit commutator word, so all
relations have zero exponent sums.  At a vertex of multiplicity m the local
monodromy commutes the product of the transported strand labels with each of
them; the m-1 relations kept are those tagged by the m-1 smallest line indices
through the vertex, which makes relation lists of arrangements with the same
combinatorics align one-to-one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .alexander import reduce_word
from .combinatorics import LineCombinatorics, multiplicity
from .wiring import BraidedWiringDiagram
from .words import concat, conjugate, exponent_sums, free_reduce, inverse


@dataclass
class ZariskiPresentation:
    """Presentation with generators x_1..x_r and commutator-word relations."""
    r: int
    relations: list                 # list of word tuples
    tags: list                      # (sorted point tuple, commuted line) per relation
    diagram_hash: str = ""

    def to_json(self) -> str:
        return json.dumps({
            "r": self.r,
            "relations": [list(w) for w in self.relations],
            "tags": [[list(p), l] for (p, l) in self.tags],
            "diagram_hash": self.diagram_hash,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ZariskiPresentation":
        d = json.loads(text)
        return cls(d["r"], [tuple(w) for w in d["relations"]],
                   [(tuple(p), l) for p, l in d["tags"]], d.get("diagram_hash", ""))


def _label_generator(label) -> int:
    """The unique generator with exponent sum +1 in a conjugated-meridian word."""
    counts = {}
    for x in label:
        counts[abs(x)] = counts.get(abs(x), 0) + (1 if x > 0 else -1)
    gens = [g for g, c in counts.items() if c != 0]
    if len(gens) != 1 or counts[gens[0]] != 1:
        raise ValueError("malformed strand label")
    return gens[0]


def from_wiring(d: BraidedWiringDiagram) -> ZariskiPresentation:
    """Transport strand labels through the diagram and collect vertex relations."""
    labels = [(line,) for line in d.initial_order]
    per_point = {}
    for e in d.events:
        if e[0] == "braid":
            _, pos, sign = e
            a, b = labels[pos], labels[pos + 1]
            if sign > 0:
                labels[pos], labels[pos + 1] = concat(a, b, inverse(a)), a
            else:
                labels[pos], labels[pos + 1] = b, concat(inverse(b), a, b)
        else:
            _, p0, m, point = e
            block = [labels[p0 + i] for i in range(m)]
            prod = concat(*block)
            forms = {}
            for k in range(m):
                ak = block[k]
                word = free_reduce(prod + ak + inverse(prod) + inverse(ak))
                forms[_label_generator(ak)] = word
            if set(forms) != set(point):
                raise ValueError("vertex block lines do not match the labels")
            per_point[point] = forms
            # half-twist transport past the vertex: order reverses, labels
            # conjugate by the partial products
            new = []
            for j in range(1, m + 1):
                pre = concat(*block[:m - j])
                new.append(concat(pre, block[m - j], inverse(pre)))
            labels[p0:p0 + m] = new
    relations = []
    tags = []
    for point in sorted(per_point, key=sorted):
        forms = per_point[point]
        lines = sorted(point)
        for l in lines[:-1]:
            relations.append(forms[l])
            tags.append((tuple(lines), l))
    return ZariskiPresentation(r=d.n_strands, relations=relations, tags=tags,
                               diagram_hash=d.content_hash())


@dataclass
class ZariskiReport:
    ok: bool
    failures: list = field(default_factory=list)


def verify_zariski(p: ZariskiPresentation, c: LineCombinatorics) -> ZariskiReport:
    """Exponent sums vanish, relation count equals the multiplicity of the
    combinatorics, and the abelianization is free of rank r."""
    failures = []
    for idx, w in enumerate(p.relations):
        sums = exponent_sums(w, p.r)
        if any(sums):
            failures.append(f"relation {idx} has nonzero exponent sum")
    if p.r != c.n - 1:
        failures.append(f"generator count {p.r} != lines-1 = {c.n - 1}")
    want = multiplicity(c)
    if len(p.relations) != want:
        failures.append(f"relation count {len(p.relations)} != multiplicity {want}")
    # with all exponent sums zero the abelianization is Z^r by construction;
    # the checks above are exactly that statement
    return ZariskiReport(ok=not failures, failures=failures)


def matched_pair(dA: BraidedWiringDiagram, dB: BraidedWiringDiagram):
    """Presentations of two diagrams with relations aligned by (point, line).

    Requires the diagrams to have the same vertex point set (same labeled
    combinatorics); corresponding relations are verified to share the same
    degree-0 class, which is the level-1 matching condition the obstruction
    construction relies on.
    """
    ptsA = {e[3] for e in dA.events if e[0] == "vertex"}
    ptsB = {e[3] for e in dB.events if e[0] == "vertex"}
    if ptsA != ptsB:
        raise ValueError("diagrams have different vertex point sets")
    pA = from_wiring(dA)
    pB = from_wiring(dB)
    if pA.tags != pB.tags:
        raise ValueError("relation tag alignment failed")
    for idx, (wa, wb) in enumerate(zip(pA.relations, pB.relations)):
        ca = reduce_word(wa, pA.r)
        cb = reduce_word(wb, pB.r)
        if ca.deg0 != cb.deg0:
            raise ValueError(f"matched relations {idx} have different degree-0 classes")
    return pA, pB
