import itertools
import random

import pytest

from arrinv.combinatorics import (CombAutomorphism, LineCombinatorics, builtin,
                                  automorphism_group, connectivity_checks,
                                  is_isomorphic, multiplicity, pair_partition_holds,
                                  subcombinatorics, triangle_count_of, triangles,
                                  validate)


def maclane_from_field_plane():
    """Independent derivation: lines are the nonzero vectors of the plane over
    the 3-element field, points are the affine lines (origin removed)."""
    pos = {0: (1, 1), 1: (1, 2), 2: (1, 0), 3: (2, 0),
           4: (0, 2), 5: (0, 1), 6: (2, 1), 7: (2, 2)}
    inv = {v: k for k, v in pos.items()}
    lines = set()
    for p in itertools.product(range(3), repeat=2):
        for d in [(0, 1), (1, 0), (1, 1), (1, 2)]:
            lines.add(frozenset(((p[0] + t * d[0]) % 3, (p[1] + t * d[1]) % 3)
                                for t in range(3)))
    pts = [frozenset(inv[q] for q in L if q != (0, 0)) for L in lines]
    return LineCombinatorics(8, pts)


def test_builtin_maclane_matches_field_plane_oracle():
    assert builtin("maclane") == maclane_from_field_plane()
    c = builtin("maclane")
    assert len(c.doubles()) == 4 and len(c.triples()) == 8


def test_validate_examples():
    assert validate(builtin("maclane")) == []
    tri = LineCombinatorics(3, [(0, 1), (0, 2), (1, 2)])
    assert validate(tri) == []
    bad = LineCombinatorics(3, [(0, 1), (0, 1, 2)])
    assert any("pair (0,1) in two points" in v for v in validate(bad))


def test_multiplicity_values():
    assert multiplicity(builtin("maclane")) == 13
    assert multiplicity(LineCombinatorics(2, [(0, 1)])) == 0
    ryb = builtin("rybnikov")
    assert multiplicity(ryb) == 51
    # independent pair-count oracle
    assert pair_partition_holds(ryb)
    assert sum(len(p) - 1 for p in ryb.points) == 51 + 13 - 1


def test_multiplicity_rejects_invalid():
    with pytest.raises(ValueError):
        multiplicity(LineCombinatorics(3, [(0, 1), (0, 1, 2)]))


def test_builtin_rybnikov_shape():
    ryb = builtin("rybnikov")
    assert ryb.n == 13
    assert len(ryb.triples()) == 15
    assert len(ryb.doubles()) == 33
    assert validate(ryb) == []


def test_builtin_m3_and_ceva():
    m3 = builtin("m3")
    assert m3.n == 3 and m3.points == frozenset({frozenset({0, 1, 2})})
    ceva = builtin("ceva")
    assert ceva.n == 6 and len(ceva.triples()) == 4 and len(ceva.doubles()) == 3
    assert validate(ceva) == []


def test_from_triples_adds_missing_doubles():
    c = LineCombinatorics.from_triples(13, [sorted(p) for p in builtin("rybnikov").triples()])
    assert c == builtin("rybnikov")


def test_automorphism_groups():
    ryb = builtin("rybnikov")
    g = automorphism_group(ryb)
    assert len(g) == 12  # product of the symmetric group on the core with a swap
    # every automorphism preserves the distinguished core {0,1,2}
    for a in g:
        assert {a.perm[0], a.perm[1], a.perm[2]} == {0, 1, 2}
    # 3 generic lines: full symmetric group
    tri = LineCombinatorics(3, [(0, 1), (0, 2), (1, 2)])
    assert len(automorphism_group(tri)) == 6
    # the 8-line structure has the full linear group of the field plane, of
    # order 48 (a brute-force fact; see the decisions ledger)
    assert len(automorphism_group(builtin("maclane"))) == 48


def test_automorphism_size_bound():
    big = LineCombinatorics.from_triples(17, [])
    with pytest.raises(ValueError):
        automorphism_group(big)


def test_subcombinatorics_restriction():
    ryb = builtin("rybnikov")
    sub = subcombinatorics(ryb, range(8))
    assert sub.comb == builtin("maclane")
    assert sub.index_map == tuple(range(8))
    assert is_isomorphic(sub.comb, builtin("maclane")) is not None
    two = subcombinatorics(ryb, [3, 9]).comb
    assert two.points == frozenset({frozenset({0, 1})})
    m3ish = subcombinatorics(builtin("maclane"), [0, 1, 2]).comb
    assert is_isomorphic(m3ish, builtin("m3")) is not None


def test_subcombinatorics_idempotent():
    ryb = builtin("rybnikov")
    assert subcombinatorics(ryb, range(13)).comb == ryb
    s1 = subcombinatorics(ryb, [0, 1, 2, 3, 4, 5]).comb
    s2 = subcombinatorics(s1, range(6)).comb
    assert s1 == s2


def test_triangle_census():
    ryb = builtin("rybnikov")
    tri = triangles(ryb)
    assert len(tri) == 88
    counts = {tuple(sorted(p)): triangle_count_of(ryb, p) for p in ryb.triples()}
    assert counts[(0, 1, 2)] == 36
    assert sorted(counts.values())[-1] == 36
    assert sum(1 for v in counts.values() if v == 36) == 1
    # triangle structural invariants
    for t in tri:
        for a, b in itertools.combinations(t.points, 2):
            assert len(a & b) == 1
    assert triangles(builtin("m3")) == []


def test_genuine_triangle_count():
    ryb = builtin("rybnikov")
    genuine = [t for t in triangles(ryb) if t.genuine]
    assert len(genuine) == 48
    assert all(len(set(t.sides)) == 3 for t in genuine)


def test_connectivity_checks():
    ryb = builtin("rybnikov")
    rep = connectivity_checks(ryb)
    assert rep.triple_chain_connected and rep.off_column_coverage
    rep = connectivity_checks(builtin("maclane"))
    assert rep.triple_chain_connected and rep.off_column_coverage
    # a line meeting everything in double points kills the coverage
    c = LineCombinatorics.from_triples(5, [(0, 1, 2)])
    rep = connectivity_checks(c)
    assert not rep.off_column_coverage


def test_automorphism_composition_api():
    g = automorphism_group(builtin("m3"))
    assert len(g) == 6
    a = g[1]
    assert a.compose(a.inverse()).perm == tuple(range(3))
    assert a.apply_point({0, 1}) == frozenset({a.perm[0], a.perm[1]})


def test_json_roundtrip_and_determinism():
    ryb = builtin("rybnikov")
    text = ryb.to_json()
    assert LineCombinatorics.from_json(text) == ryb
    assert text == builtin("rybnikov").to_json()


def test_point_of_pair():
    ryb = builtin("rybnikov")
    assert ryb.point_of_pair(0, 1) == frozenset({0, 1, 2})
    assert ryb.point_of_pair(9, 10) == frozenset({9, 10})
