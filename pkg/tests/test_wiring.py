from fractions import Fraction

import pytest

from arrinv.combinatorics import builtin, multiplicity
from arrinv.exact.numbers import CycloNumber, CYCLO_ONE
from arrinv.wiring import (Arrangement, BraidedWiringDiagram, NonGenericShear,
                           ProjLine, common_chart, conjugate_diagram,
                           decone_and_shear, find_gluing_transform,
                           line_intersection, maclane_arrangement, proj_normalize,
                           realize_rybnikov, wiring_diagram, DEFAULT_GLUING)


def test_maclane_arrangement_combinatorics():
    arr = maclane_arrangement(False)
    assert arr.combinatorics() == builtin("maclane")
    conj = maclane_arrangement(True)
    assert conj.combinatorics() == builtin("maclane")
    # the two ordered realizations are coefficientwise conjugate
    assert [l.coeffs() for l in arr.conjugate().lines] == [l.coeffs() for l in conj.lines]


def test_realize_rybnikov_all_kinds():
    target = builtin("rybnikov")
    arrs = {k: realize_rybnikov(k) for k in ("++", "+-", "-+", "--")}
    for arr in arrs.values():
        assert arr.combinatorics() == target
    # ++ and -- are coefficientwise conjugate, likewise +- and -+
    assert ([l.coeffs() for l in arrs["++"].conjugate().lines]
            == [l.coeffs() for l in arrs["--"].lines])
    assert ([l.coeffs() for l in arrs["+-"].conjugate().lines]
            == [l.coeffs() for l in arrs["-+"].lines])


def test_gluing_search_finds_default():
    assert find_gluing_transform() == DEFAULT_GLUING


def test_decone_rejects_bad_shear():
    arr = maclane_arrangement(False)
    # shear 0 leaves two lines vertical in the chart
    with pytest.raises(NonGenericShear):
        decone_and_shear(arr, 0)


def test_maclane_affine_model_and_vertex_census():
    arr = maclane_arrangement(False)
    shear, rot = common_chart([arr])
    model = decone_and_shear(arr, shear, rot)
    assert len(model.sheets) == 7
    # 8 finite vertices: 5 triples and 3 doubles avoid the deconed line
    assert len(model.vertices) == 8
    sizes = sorted(len(v[1]) for v in model.vertices)
    assert sizes == [2, 2, 2, 3, 3, 3, 3, 3]
    d = wiring_diagram(model)
    assert len(d.vertex_events()) == 8
    # sum over vertices of (multiplicity - 1) equals the combinatorial count
    total = sum(len(e[3]) - 1 for e in d.vertex_events())
    assert total == multiplicity(builtin("maclane")) == 13


def test_three_real_lines_monotone_wiring():
    lines = [
        (CYCLO_ONE, CycloNumber(0), CycloNumber(0)),      # deconed
        (CycloNumber(0), CYCLO_ONE, CycloNumber(-1)),
        (CycloNumber(1), CYCLO_ONE, CycloNumber(1)),
        (CycloNumber(3), CYCLO_ONE, CycloNumber(2)),
    ]
    arr = Arrangement(lines, decone_index=0)
    shear, rot = common_chart([arr])
    d = wiring_diagram(decone_and_shear(arr, shear, rot))
    assert len(d.vertex_events()) == 3
    assert d.braid_letters() == []


def test_replay_and_final_order(maclane_bundle):
    d = maclane_bundle["dA"]
    assert d.replay_permutation() == d.final_order
    assert sorted(d.initial_order) == sorted(d.final_order)


def test_conjugate_diagram_involution(maclane_bundle):
    d = maclane_bundle["dA"]
    assert conjugate_diagram(conjugate_diagram(d)).events == d.events
    # a diagram with no braid letters is fixed
    lines = [
        (CYCLO_ONE, CycloNumber(0), CycloNumber(0)),
        (CycloNumber(0), CYCLO_ONE, CycloNumber(-1)),
        (CycloNumber(1), CYCLO_ONE, CycloNumber(1)),
    ]
    arr = Arrangement(lines, decone_index=0)
    shear, rot = common_chart([arr])
    d2 = wiring_diagram(decone_and_shear(arr, shear, rot))
    assert conjugate_diagram(d2).events == d2.events


def test_conjugate_diagram_matches_conjugated_arrangement(maclane_bundle):
    arrA = maclane_bundle["arrA"]
    arrB = maclane_bundle["arrB"]
    shear, rot = maclane_bundle["chart"]
    dA = maclane_bundle["dA"]
    # sweeping the conjugated arrangement with the conjugated fiber rotation
    # flips every crossing sign and keeps the vertex sequence
    dBc = wiring_diagram(decone_and_shear(arrB, shear, rot.conjugate()))
    assert conjugate_diagram(dA).events == dBc.events
    assert conjugate_diagram(dA).initial_order == dBc.initial_order


def test_diagram_json_roundtrip(maclane_bundle):
    d = maclane_bundle["dA"]
    again = BraidedWiringDiagram.from_json(d.to_json())
    assert again.events == d.events
    assert again.initial_order == d.initial_order
    assert again.to_json() == d.to_json()
    assert d.content_hash() == again.content_hash()


def test_arrangement_json_roundtrip():
    arr = realize_rybnikov("++")
    again = Arrangement.from_json(arr.to_json())
    assert [l.coeffs() for l in again.lines] == [l.coeffs() for l in arr.lines]
    assert again.decone_index == arr.decone_index


def test_arrangement_rejects_duplicates_and_mismatch():
    l1 = ProjLine.make(1, 0, 0)
    with pytest.raises(ValueError):
        Arrangement([l1, ProjLine.make(2, 0, 0)])
    with pytest.raises(ValueError):
        Arrangement([(1, 0, 0), (0, 1, 0), (0, 0, 1)], declared=builtin("m3"))


def test_line_intersection_and_normalization():
    l1 = ProjLine.make(1, 0, 0)
    l2 = ProjLine.make(0, 1, 0)
    p = proj_normalize(line_intersection(l1, l2))
    assert p == (CycloNumber(0), CycloNumber(0), CYCLO_ONE)


def test_vertex_blocks_are_points_of_the_combinatorics(rybnikov_bundle):
    c = rybnikov_bundle["comb"]
    for d in (rybnikov_bundle["dA"], rybnikov_bundle["dB"]):
        pts = [e[3] for e in d.vertex_events()]
        assert len(pts) == 41
        for p in pts:
            assert p in c.points
        total = sum(len(p) - 1 for p in pts)
        assert total == 51
