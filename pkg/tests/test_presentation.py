import pytest

from arrinv.combinatorics import LineCombinatorics, builtin
from arrinv.exact.numbers import CycloNumber, CYCLO_ONE
from arrinv.presentation import (ZariskiPresentation, from_wiring, matched_pair,
                                 verify_zariski)
from arrinv.wiring import (Arrangement, common_chart, conjugate_diagram,
                           decone_and_shear, wiring_diagram)
from arrinv.words import exponent_sums


def test_single_double_point_relation():
    lines = [
        (CYCLO_ONE, CycloNumber(0), CycloNumber(0)),
        (CycloNumber(0), CYCLO_ONE, CycloNumber(-1)),
        (CycloNumber(1), CYCLO_ONE, CycloNumber(1)),
    ]
    arr = Arrangement(lines, decone_index=0)
    shear, rot = common_chart([arr])
    pres = from_wiring(wiring_diagram(decone_and_shear(arr, shear, rot)))
    assert pres.r == 2
    assert len(pres.relations) == 1
    # the commutator of the two meridians, possibly conjugated
    w = pres.relations[0]
    assert exponent_sums(w, 2) == [0, 0]
    assert verify_zariski(pres, arr.combinatorics()).ok


def test_maclane_relation_count(maclane_bundle):
    pres = maclane_bundle["pA"]
    assert len(pres.relations) == 13
    rep = verify_zariski(pres, maclane_bundle["comb"])
    assert rep.ok


def test_rybnikov_relation_count(rybnikov_bundle):
    for key in ("pA", "pB"):
        pres = rybnikov_bundle[key]
        assert len(pres.relations) == 51
        assert verify_zariski(pres, rybnikov_bundle["comb"]).ok


def test_verify_zariski_failures():
    pres = ZariskiPresentation(r=2, relations=[(1, 2)], tags=[((1, 2), 1)])
    rep = verify_zariski(pres, LineCombinatorics(3, [(0, 1), (0, 2), (1, 2)]))
    assert not rep.ok
    assert any("exponent" in f for f in rep.failures)


def test_matched_pair_conjugate(maclane_bundle):
    dA = maclane_bundle["dA"]
    pA, pC = matched_pair(dA, conjugate_diagram(dA))
    assert len(pA.relations) == len(pC.relations) == 13
    assert pA.tags == pC.tags


def test_matched_pair_self(maclane_bundle):
    dA = maclane_bundle["dA"]
    p1, p2 = matched_pair(dA, dA)
    assert p1.relations == p2.relations


def test_matched_pair_rejects_different_point_sets(maclane_bundle):
    lines = [
        (CYCLO_ONE, CycloNumber(0), CycloNumber(0)),
        (CycloNumber(0), CYCLO_ONE, CycloNumber(-1)),
        (CycloNumber(1), CYCLO_ONE, CycloNumber(1)),
    ]
    arr = Arrangement(lines, decone_index=0)
    shear, rot = common_chart([arr])
    d = wiring_diagram(decone_and_shear(arr, shear, rot))
    with pytest.raises(ValueError):
        matched_pair(maclane_bundle["dA"], d)


def test_rybnikov_matched(rybnikov_bundle):
    assert rybnikov_bundle["pA"].tags == rybnikov_bundle["pB"].tags
    assert len(rybnikov_bundle["pA"].relations) == 51


def test_presentation_json_roundtrip(maclane_bundle):
    pres = maclane_bundle["pA"]
    again = ZariskiPresentation.from_json(pres.to_json())
    assert again.relations == pres.relations
    assert again.tags == pres.tags
    assert again.diagram_hash == pres.diagram_hash
    assert again.diagram_hash == maclane_bundle["dA"].content_hash()


def test_deterministic_rebuild(maclane_bundle):
    """Rebuilding the presentation from the same diagram is byte-stable."""
    d = maclane_bundle["dA"]
    assert from_wiring(d).to_json() == from_wiring(d).to_json()
