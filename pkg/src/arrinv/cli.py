"""Command-line entry point: reproducible pipelines with machine-readable reports.

Exit codes: 0 = certified pass, 1 = certified fail, 2 = inconclusive/unknown,
3 = usage error.  All randomness sits behind --seed; re-running a command with
identical inputs and seed yields byte-identical reports up to the `timings`
block, which is informational and excluded from the determinism contract.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from .combinatorics import (LineCombinatorics, automorphism_group, builtin,
                            multiplicity, triangle_count_of, triangles, validate)
from .homtriv import build_system, solve, verify_witness
from .presentation import ZariskiPresentation, from_wiring, matched_pair, verify_zariski
from .rigidity import decide_3_admissible, pointwise_3_admissible, rigidity_verdict
from .wiring import (Arrangement, BraidedWiringDiagram, common_chart,
                     decone_and_shear, maclane_arrangement, realize_rybnikov,
                     wiring_diagram)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3


def _hash_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _load_comb(spec: str) -> LineCombinatorics:
    try:
        return builtin(spec)
    except ValueError:
        with open(spec, "r", encoding="utf-8") as fh:
            return LineCombinatorics.from_json(fh.read())


def strip_timings(report: dict) -> dict:
    out = dict(report)
    out.pop("timings", None)
    return out


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, indent=2, default=str)
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if getattr(args, "format", "text") == "json":
        print(text)
    else:
        concl = report.get("conclusion", "")
        print(f"arrinv {report.get('command', '')}: {concl}")
        for stage in report.get("stages", []):
            name = stage.get("name", "")
            info = {k: v for k, v in stage.items() if k != "name"}
            print(f"  [{name}] " + json.dumps(info, sort_keys=True, default=str))


# -- pipelines -----------------------------------------------------------------

def matched_presentations(arrA: Arrangement, arrB: Arrangement):
    """Common generic chart, diagrams, matched presentations for two
    arrangements with the same labeled combinatorics."""
    shear, rot = common_chart([arrA, arrB])
    dA = wiring_diagram(decone_and_shear(arrA, shear, rot))
    dB = wiring_diagram(decone_and_shear(arrB, shear, rot))
    pA, pB = matched_pair(dA, dB)
    return (shear, rot), (dA, dB), (pA, pB)


def obstruction_verdict(arrA: Arrangement, arrB: Arrangement, c: LineCombinatorics):
    chart, diagrams, (pA, pB) = matched_presentations(arrA, arrB)
    system = build_system(pA, pB, c)
    verdict = solve(system)
    return chart, system, verdict


def cmd_reproduce(args) -> int:
    t0 = time.monotonic()
    stages = []
    timings = {}
    target = args.target
    if target == "maclane":
        c = builtin("maclane")
        arrA = maclane_arrangement(False)
        arrB = arrA if args.self_compare else maclane_arrangement(True)
    elif target == "rybnikov":
        c = builtin("rybnikov")
        arrA = realize_rybnikov("++")
        arrB = arrA if args.self_compare else realize_rybnikov("-+")
    else:
        print(f"unknown target {target}", file=sys.stderr)
        return EXIT_USAGE
    stages.append({"name": "build", "lines": len(arrA),
                   "input_hash": _hash_text(arrA.to_json() + arrB.to_json())})
    timings["build"] = time.monotonic() - t0

    t1 = time.monotonic()
    chart, system, verdict = obstruction_verdict(arrA, arrB, c)
    timings["obstruction"] = time.monotonic() - t1
    stages.append({"name": "chart", "shear": str(chart[0]), "rotation": str(chart[1])})
    stages.append({"name": "system", "rows": system.A.rows, "vars": system.n_vars,
                   "appearing": len(system.appearing),
                   "dropped_zero_rows": system.dropped_zero_rows})
    stages.append({"name": "solve", **verdict.to_json()})

    conclusion_bits = []
    if args.self_compare:
        ok = verdict.integer_feasible and verify_witness(system, verdict.witness)
        conclusion_bits.append("self-comparison integrally feasible"
                               if ok else "self-comparison FAILED")
        code = EXIT_PASS if ok else EXIT_FAIL
    else:
        if verdict.integer_feasible:
            conclusion_bits.append("no obstruction found at level 2")
            code = EXIT_FAIL
        else:
            conclusion_bits.append("no homology-trivial isomorphism exists")
            code = EXIT_PASS
    if target == "rybnikov" and not args.self_compare:
        t2 = time.monotonic()
        rig = rigidity_verdict(c, seed=args.seed)
        timings["rigidity"] = time.monotonic() - t2
        stages.append({"name": "rigidity", "verdict": rig.verdict,
                       "candidates": rig.candidates, "from_aut": rig.from_aut,
                       "obstructed": rig.obstructed,
                       "identity_checks": rig.identity_checks})
        if rig.verdict == "rigid" and code == EXIT_PASS:
            conclusion_bits.append("combinatorics homologically rigid")
            conclusion_bits.append("fundamental groups of the two realizations"
                                   " are not isomorphic")
        elif rig.verdict != "rigid":
            code = EXIT_UNKNOWN
    report = {
        "command": f"reproduce {target}" + (" --self-compare" if args.self_compare else ""),
        "tool": "arrinv",
        "version": __version__,
        "seed": args.seed,
        "stages": stages,
        "conclusion": "; ".join(conclusion_bits),
        "timings": {k: round(v, 3) for k, v in timings.items()},
    }
    _emit(report, args)
    return code


def cmd_comb(args) -> int:
    c = _load_comb(args.name)
    if args.action == "validate":
        bad = validate(c)
        report = {"command": "comb validate", "violations": bad,
                  "conclusion": "valid" if not bad else f"{len(bad)} violations"}
        _emit(report, args)
        return EXIT_PASS if not bad else EXIT_FAIL
    if args.action == "info":
        report = {"command": "comb info", "lines": c.n, "points": len(c.points),
                  "doubles": len(c.doubles()), "triples": len(c.triples()),
                  "multiplicity": multiplicity(c),
                  "conclusion": f"{c.n} lines, {len(c.points)} points,"
                                f" multiplicity {multiplicity(c)}"}
        _emit(report, args)
        return EXIT_PASS
    if args.action == "aut":
        group = automorphism_group(c)
        report = {"command": "comb aut", "order": len(group),
                  "conclusion": f"automorphism group of order {len(group)}"}
        _emit(report, args)
        return EXIT_PASS
    if args.action == "triangles":
        tri = triangles(c)
        per_point = {",".join(map(str, sorted(p))): triangle_count_of(c, p)
                     for p in c.triples()}
        report = {"command": "comb triangles", "total": len(tri),
                  "per_point": per_point,
                  "conclusion": f"{len(tri)} triangles"}
        _emit(report, args)
        return EXIT_PASS
    return EXIT_USAGE


def cmd_adm(args) -> int:
    c = _load_comb(args.name)
    if args.action == "check":
        v = decide_3_admissible(c)
        report = {"command": "adm check", "status": v.status,
                  "certificate": v.certificate, "branches": v.branches,
                  "conclusion": v.status}
        _emit(report, args)
        return {"admissible": EXIT_PASS, "not_admissible": EXIT_FAIL,
                "unknown": EXIT_UNKNOWN}[v.status]
    if args.action == "pointwise":
        rep = pointwise_3_admissible(c, jobs=args.jobs)
        report = {"command": "adm pointwise", "passed": rep.passed,
                  "checked": rep.checked, "cache_hits": rep.cache_hits,
                  "bad_subsets": [list(s) for s in rep.bad_subsets],
                  "unknown_subsets": [list(s) for s in rep.unknown_subsets],
                  "conclusion": "pointwise 3-admissible" if rep.passed else "fails"}
        _emit(report, args)
        if rep.unknown_subsets:
            return EXIT_UNKNOWN
        return EXIT_PASS if rep.passed else EXIT_FAIL
    return EXIT_USAGE


def cmd_rigid(args) -> int:
    c = _load_comb(args.name)
    rep = rigidity_verdict(c, seed=args.seed)
    report = {
        "command": "rigid check",
        "verdict": rep.verdict,
        "candidates": rep.candidates,
        "from_aut": rep.from_aut,
        "obstructed": rep.obstructed,
        "unresolved": [list(u) for u in rep.unresolved],
        "identity_checks": rep.identity_checks,
        "witness": rep.witness.m.entries if rep.witness else None,
        "detail": rep.detail,
        "seed": args.seed,
        "conclusion": rep.verdict,
    }
    _emit(report, args)
    return {"rigid": EXIT_PASS, "not_rigid": EXIT_FAIL,
            "inconclusive": EXIT_UNKNOWN}[rep.verdict]


def _arrangement_for(name: str) -> Arrangement:
    if name == "maclane":
        return maclane_arrangement(False)
    if name == "maclane-conj":
        return maclane_arrangement(True)
    if name in ("++", "+-", "-+", "--"):
        return realize_rybnikov(name)
    with open(name, "r", encoding="utf-8") as fh:
        return Arrangement.from_json(fh.read())


def cmd_wiring(args) -> int:
    arr = _arrangement_for(args.arrangement)
    shear, rot = common_chart([arr])
    d = wiring_diagram(decone_and_shear(arr, shear, rot))
    text = d.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    report = {"command": "wiring", "vertices": len(d.vertex_events()),
              "braid_letters": len(d.braid_letters()),
              "shear": str(shear), "rotation": str(rot),
              "diagram_hash": d.content_hash(),
              "conclusion": f"{len(d.vertex_events())} vertices"}
    _emit(report, args)
    return EXIT_PASS


def cmd_present(args) -> int:
    if args.diagram:
        with open(args.diagram, "r", encoding="utf-8") as fh:
            d = BraidedWiringDiagram.from_json(fh.read())
    else:
        arr = _arrangement_for(args.arrangement)
        shear, rot = common_chart([arr])
        d = wiring_diagram(decone_and_shear(arr, shear, rot))
    pres = from_wiring(d)
    text = pres.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    report = {"command": "present", "generators": pres.r,
              "relations": len(pres.relations),
              "conclusion": f"{pres.r} generators, {len(pres.relations)} relations"}
    _emit(report, args)
    return EXIT_PASS


def cmd_alex(args) -> int:
    from .alexander import gr0_presentation, gr1_presentation, m2_rank
    c = _load_comb(args.name)
    g0 = gr0_presentation(c)
    g1 = gr1_presentation(c)
    report = {"command": "alex ranks", "gr0": g0.rank, "gr1": g1.rank,
              "gr0_free": g0.free, "gr1_free": g1.free}
    if args.with_m2:
        arr = _arrangement_for(args.arrangement or "maclane")
        shear, rot = common_chart([arr])
        pres = from_wiring(wiring_diagram(decone_and_shear(arr, shear, rot)))
        ranks = m2_rank(c, pres)
        report["m2_total"] = ranks.total
        report["m2_torsion_free"] = ranks.torsion_free
    report["conclusion"] = f"gr0 {g0.rank}, gr1 {g1.rank}"
    _emit(report, args)
    return EXIT_PASS


def cmd_homtriv(args) -> int:
    with open(args.left, "r", encoding="utf-8") as fh:
        pA = ZariskiPresentation.from_json(fh.read())
    with open(args.right, "r", encoding="utf-8") as fh:
        pB = ZariskiPresentation.from_json(fh.read())
    c = _load_comb(args.comb)
    for p in (pA, pB):
        rep = verify_zariski(p, c)
        if not rep.ok:
            print("presentation check failed: " + "; ".join(rep.failures),
                  file=sys.stderr)
            return EXIT_USAGE
    system = build_system(pA, pB, c)
    verdict = solve(system)
    report = {"command": "homtriv solve", **verdict.to_json(),
              "dropped_zero_rows": system.dropped_zero_rows,
              "conclusion": ("integrally feasible" if verdict.integer_feasible else
                             "integrally infeasible" if verdict.rational_feasible else
                             "rationally infeasible")}
    _emit(report, args)
    return EXIT_PASS if verdict.integer_feasible else EXIT_FAIL


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="arrinv",
                                     description="exact line-arrangement invariants")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--report", type=str, default=None)
    parser.add_argument("--format", choices=("json", "text"), default="text")
    sub = parser.add_subparsers(dest="cmd")

    p = sub.add_parser("reproduce", help="run a full separation pipeline")
    p.add_argument("target", choices=("maclane", "rybnikov"))
    p.add_argument("--self-compare", action="store_true")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("comb", help="combinatorics queries")
    p.add_argument("action", choices=("validate", "info", "aut", "triangles"))
    p.add_argument("name")
    p.set_defaults(func=cmd_comb)

    p = sub.add_parser("adm", help="3-admissibility")
    p.add_argument("action", choices=("check", "pointwise"))
    p.add_argument("name")
    p.set_defaults(func=cmd_adm)

    p = sub.add_parser("rigid", help="homological rigidity")
    p.add_argument("action", choices=("check",))
    p.add_argument("name")
    p.set_defaults(func=cmd_rigid)

    p = sub.add_parser("wiring", help="braided wiring diagram")
    p.add_argument("arrangement")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_wiring)

    p = sub.add_parser("present", help="presentation from a diagram")
    p.add_argument("--arrangement", type=str, default=None)
    p.add_argument("--diagram", type=str, default=None)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("alex", help="graded/level-2 ranks")
    p.add_argument("name")
    p.add_argument("--with-m2", action="store_true")
    p.add_argument("--arrangement", type=str, default=None)
    p.set_defaults(func=cmd_alex)

    p = sub.add_parser("homtriv", help="obstruction system for two presentations")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--comb", required=True)
    p.set_defaults(func=cmd_homtriv)

    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
