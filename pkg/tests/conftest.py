import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arrinv.combinatorics import builtin
from arrinv.homtriv import build_system, solve
from arrinv.presentation import matched_pair
from arrinv.wiring import (common_chart, decone_and_shear, maclane_arrangement,
                           realize_rybnikov, wiring_diagram)


@pytest.fixture(scope="session")
def maclane_bundle():
    """Shared MacLane pipeline artifacts: chart, diagrams, matched
    presentations, obstruction system and verdict."""
    c = builtin("maclane")
    arrA = maclane_arrangement(False)
    arrB = maclane_arrangement(True)
    shear, rot = common_chart([arrA, arrB])
    dA = wiring_diagram(decone_and_shear(arrA, shear, rot))
    dB = wiring_diagram(decone_and_shear(arrB, shear, rot))
    pA, pB = matched_pair(dA, dB)
    system = build_system(pA, pB, c)
    verdict = solve(system)
    return {
        "comb": c, "arrA": arrA, "arrB": arrB, "chart": (shear, rot),
        "dA": dA, "dB": dB, "pA": pA, "pB": pB,
        "system": system, "verdict": verdict,
    }


@pytest.fixture(scope="session")
def rybnikov_bundle():
    """Shared 13-line pipeline artifacts for the ++ vs -+ comparison."""
    c = builtin("rybnikov")
    arrA = realize_rybnikov("++")
    arrB = realize_rybnikov("-+")
    shear, rot = common_chart([arrA, arrB])
    dA = wiring_diagram(decone_and_shear(arrA, shear, rot))
    dB = wiring_diagram(decone_and_shear(arrB, shear, rot))
    pA, pB = matched_pair(dA, dB)
    system = build_system(pA, pB, c)
    verdict = solve(system)
    return {
        "comb": c, "arrA": arrA, "arrB": arrB, "chart": (shear, rot),
        "dA": dA, "dB": dB, "pA": pA, "pB": pB,
        "system": system, "verdict": verdict,
    }


@pytest.fixture(scope="session")
def rybnikov_rigidity():
    from arrinv.rigidity import rigidity_verdict
    return rigidity_verdict(builtin("rybnikov"), seed=0)
