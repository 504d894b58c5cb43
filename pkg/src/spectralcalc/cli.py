"""Command-line workbench: ``spectralcalc <command> [--builtin NAME | --triple FILE]``.

Exit codes: 0 success, 1 input error, 2 mathematical inconsistency,
3 certificate verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .calculus import ConnesCalculus, NotFreeError
from .complex_structures import (
    InfiniteSolutionFamily, NonDiagonalizable, NotWellDefined, acs_constraints, compare_with_printed,
    extend_and_pq, integrability_check, solve_acs,
)
from .kahler import (
    EmptyFamily, NoKahlerCertificate, NotInOneOne, kahler_search_certificate,
    solve_compatible_metrics, solve_hermitian_metrics, verify_certificate,
)
from .triple import (
    BUILTINS, GraphTripleSpec, InvalidSpec, NotSelfAdjoint, UnfaithfulRepresentation, builtin,
    verify_spectral_triple,
)

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_CERT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _spec(args) -> GraphTripleSpec:
    if args.triple:
        return GraphTripleSpec.load(args.triple)
    return builtin(args.builtin or "three-point")


def _calculus(args) -> ConnesCalculus:
    spec = _spec(args)
    verify_spectral_triple(spec)
    return ConnesCalculus(spec, max_degree=max(args.max_degree, 1))


def _triple_json(calc: ConnesCalculus) -> dict:
    spec = calc.triple.spec
    return {"name": spec.name, **spec.to_json()}


def _fn(f) -> str:
    return f.pretty()


# -- report builders ---------------------------------------------------------


def calculus_report(calc: ConnesCalculus, max_degree: int) -> dict:
    degrees = []
    for p in range(max_degree + 1):
        space = calc.space(p)
        degrees.append({"degree": p, "dim": space.dim, "junk_dim": space.junk_dim})
    report = {"triple": _triple_json(calc), "max_degree": max_degree, "degrees": degrees}
    if max_degree < 1:
        return report
    free = {}
    for side in ("right", "left"):
        res = calc.free_basis_check(side)
        if res:
            free[side] = {"free": True, "rank": res.rank, "generators": [f"e{k + 1}" for k in range(res.rank)]}
        else:
            free[side] = {"free": False, "reason": res.reason, "witness": [w.to_json() for w in res.witness]}
    report["free_basis"] = free
    if free["right"]["free"]:
        table = calc.bimodule_table()
        r = len(table)
        rows = []
        for k in range(calc.n):
            for j in range(r):
                rows.append({"lhs": f"chi{k + 1} e{j + 1}",
                             "rhs": [{"basis": f"e{m + 1}", "coefficient": table[m][k][j].to_json(),
                                      "pretty": _fn(table[m][k][j])} for m in range(r) if table[m][k][j]]})
        report["table"] = rows
    return report


def classify_report(calc: ConnesCalculus, compare_printed: bool) -> dict:
    system = acs_constraints(calc)
    sol = solve_acs(system, calc.base, calc)
    entries = []
    keys = {J.key() for J in sol}
    for k, J in enumerate(sol, start=1):
        pq = extend_and_pq(J, calc, min(calc.max_degree, 3) if calc.max_degree >= 2 else 2)
        entries.append({
            "index": k,
            "matrix": J.to_json(),
            "pretty": J.pretty(),
            "integrable": bool(integrability_check(J, pq)),
            "pq_dims": {str(n): {f"{p},{q}": d for (p, q), d in sorted(pq.dims(n).items())}
                        for n in sorted(pq.components)},
        })
    report = {
        "triple": _triple_json(calc),
        "real_parameters": sol.parameters,
        "count": len(sol),
        "closed_under_negation": all((-J).key() in keys for J in sol),
        "dropped_branches": [str(b) for b in sol.dropped],
        "solutions": entries,
    }
    if compare_printed:
        if calc.n != 3:
            raise InputError("--compare-paper applies to the three-point triple only")
        cmp = compare_with_printed(sol.structures, calc)
        report["printed_comparison"] = {
            "matched": [{"label": label, "solution": idx + 1} for label, idx in cmp.matched],
            "rejected": [{"label": label, "violation": str(v)} for label, v in cmp.rejected],
            "unmatched_solutions": [J.pretty() for J in cmp.unmatched_solutions],
        }
    return report


def integrability_report(calc: ConnesCalculus) -> dict:
    sol = solve_acs(acs_constraints(calc), calc.base, calc)
    out = []
    for k, J in enumerate(sol, start=1):
        pq = extend_and_pq(J, calc, 2)
        res = integrability_check(J, pq)
        basis = [[str(c) for c in w] for w in pq.components[1][(1, 0)]]
        out.append({"index": k, "pretty": J.pretty(), "integrable": bool(res), "omega10_basis": basis,
                    "witness": res.witness})
    return {"triple": _triple_json(calc), "structures": out}


def kahler_report(calc: ConnesCalculus, cert_dir: Path | None) -> tuple[dict, list]:
    sol = solve_acs(acs_constraints(calc), calc.base, calc)
    out, certs = [], []
    for k, J in enumerate(sol, start=1):
        entry = {"index": k, "pretty": J.pretty()}
        try:
            fam = solve_compatible_metrics(calc, J)
            entry["family"] = {"dimension": fam.dimension, "parameters": fam.parameters,
                               "basis": [g.pretty() for g in fam.basis], "nondegeneracy": fam.nondegeneracy(),
                               "notes": fam.notes}
        except EmptyFamily as exc:
            entry["family"] = {"dimension": 0, "error": str(exc)}
        try:
            entry["hermitian_family_dimension"] = solve_hermitian_metrics(calc, J).dimension
        except EmptyFamily:
            entry["hermitian_family_dimension"] = 0
        res = kahler_search_certificate(calc, J, label=f"structure {k}")
        if isinstance(res, NoKahlerCertificate):
            data = res.to_json()
            entry["result"] = "no-kahler"
            entry["witness_points"] = data["witness"]["points"]
            entry["solution_dimension"] = len(res.solution_basis)
            if cert_dir is not None:
                path = cert_dir / f"cert{k}.json"
                path.write_text(_dumps(data))
                entry["certificate"] = path.name
                certs.append(path)
        else:
            entry["result"] = "KAHLER METRIC FOUND"
            entry["metric"] = res.metric.pretty()
        out.append(entry)
    return {"triple": _triple_json(calc), "structures": out}, certs


# -- text rendering ----------------------------------------------------------


def _text_calculus(r: dict) -> list[str]:
    lines = [f"triple {r['triple']['name'] or '(file)'}: points {r['triple']['points']}"]
    for d in r["degrees"]:
        lines.append(f"dim Omega^{d['degree']} = {d['dim']} (junk {d['junk_dim']})")
    for side, info in r.get("free_basis", {}).items():
        if info["free"]:
            lines.append(f"free {side} basis: {', '.join(info['generators'])} (rank {info['rank']})")
        else:
            lines.append(f"not free as a {side} module: {info['reason']}")
    for row in r.get("table", []):
        rhs = " + ".join(f"{t['basis']} ({t['pretty']})" for t in row["rhs"]) or "0"
        lines.append(f"{row['lhs']} = {rhs}")
    return lines


def _text_classify(r: dict) -> list[str]:
    lines = [f"{r['count']} almost complex structures ({r['real_parameters']} real parameters after linear stage)",
             f"closed under negation: {r['closed_under_negation']}"]
    for s in r["solutions"]:
        verdict = "integrable" if s["integrable"] else "NOT integrable"
        lines.append(f"  J{s['index']} = {s['pretty']}  [{verdict}]")
    cmp = r.get("printed_comparison")
    if cmp:
        lines.append(f"printed list: {len(cmp['matched'])} matched, {len(cmp['rejected'])} rejected")
        for m in cmp["matched"]:
            lines.append(f"  {m['label']} = J{m['solution']}")
        for m in cmp["rejected"]:
            lines.append(f"  {m['label']} rejected: {m['violation']}")
        for p in cmp["unmatched_solutions"]:
            lines.append(f"  solver structure not in the printed list: {p}")
    return lines


def _text_integrability(r: dict) -> list[str]:
    lines = []
    for s in r["structures"]:
        verdict = "integrable" if s["integrable"] else f"NOT integrable, witness {s['witness']}"
        lines.append(f"J{s['index']} = {s['pretty']}: dim Omega^(1,0) = {len(s['omega10_basis'])}, {verdict}")
    return lines


def _text_kahler(r: dict) -> list[str]:
    lines = []
    for s in r["structures"]:
        fam = s["family"]
        lines.append(f"J{s['index']} = {s['pretty']}")
        lines.append(f"  compatible metrics: dimension {fam['dimension']}, "
                     f"hermitian: dimension {s['hermitian_family_dimension']}")
        if s["result"] == "no-kahler":
            lines.append(f"  no Kahler metric: det vanishes at point(s) {', '.join(s['witness_points'])} "
                         f"on the {s['solution_dimension']}-dimensional solution space")
            if "certificate" in s:
                lines.append(f"  certificate: {s['certificate']}")
        else:
            lines.append(f"  !!! {s['result']}: {s['metric']}")
    return lines


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(args, report: dict, text_lines) -> None:
    if args.output == "json":
        sys.stdout.write(_dumps(report))
    else:
        sys.stdout.write("\n".join(text_lines(report)) + "\n")


# -- commands ------------------------------------------------------------------


def cmd_calculus(args) -> int:
    calc = _calculus(args)
    report = calculus_report(calc, args.max_degree)
    _emit(args, report, _text_calculus)
    free = report.get("free_basis", {}).get("right", {"free": True})
    return EXIT_OK if free["free"] else EXIT_MATH


def cmd_classify(args) -> int:
    calc = _calculus(args)
    _emit(args, classify_report(calc, args.compare_paper), _text_classify)
    return EXIT_OK


def cmd_integrability(args) -> int:
    calc = _calculus(args)
    _emit(args, integrability_report(calc), _text_integrability)
    return EXIT_OK


def cmd_kahler(args) -> int:
    calc = _calculus(args)
    cert_dir = Path(args.cert_dir) if args.cert_dir else None
    if cert_dir is not None:
        cert_dir.mkdir(parents=True, exist_ok=True)
    report, certs = kahler_report(calc, cert_dir)
    _emit(args, report, _text_kahler)
    for path in certs:
        check = verify_certificate(json.loads(path.read_text()))
        if not check:
            print(f"certificate {path} failed re-verification: {check.failures[0]}", file=sys.stderr)
            return EXIT_CERT
    return EXIT_OK


def cmd_verify(args) -> int:
    status = EXIT_OK
    results = []
    for name in args.files:
        try:
            data = json.loads(Path(name).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read certificate {name}: {exc}") from exc
        check = verify_certificate(data)
        results.append({"file": name, "ok": check.ok, "failures": check.failures})
        if not check:
            status = EXIT_CERT
    if args.output == "json":
        sys.stdout.write(_dumps({"results": results}))
    else:
        for r in results:
            print(f"{r['file']}: {'pass' if r['ok'] else 'FAIL'}")
            for f in r["failures"]:
                print(f"  {f}")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectralcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--builtin", choices=sorted(BUILTINS), help="builtin triple (default three-point)")
        src.add_argument("--triple", metavar="FILE", help="JSON triple definition")
        p.add_argument("--max-degree", type=int, default=3, metavar="N")
        p.add_argument("--output", choices=("text", "json"), default="text")

    p = sub.add_parser("calculus", help="dimensions, junk, free basis and bimodule table")
    common(p)
    p.set_defaults(func=cmd_calculus)
    p = sub.add_parser("classify", help="enumerate almost complex structures")
    common(p)
    p.add_argument("--compare-paper", action="store_true", help="compare with the printed three-point list")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("integrability", help="integrability of each structure")
    common(p)
    p.set_defaults(func=cmd_integrability)
    p = sub.add_parser("kahler", help="compatible metrics and Kahler nonexistence certificates")
    common(p)
    p.add_argument("--cert-dir", metavar="DIR", help="write certN.json files here")
    p.set_defaults(func=cmd_kahler)
    p = sub.add_parser("verify-certificate", help="re-check certificate files")
    p.add_argument("files", nargs="+")
    p.add_argument("--output", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_degree", 0) < 0:
        parser.error("--max-degree must be non-negative")
    try:
        return args.func(args)
    except (InvalidSpec, InputError, NotSelfAdjoint, UnfaithfulRepresentation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotFreeError, NonDiagonalizable, NotWellDefined, NotInOneOne, InfiniteSolutionFamily,
            ArithmeticError) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
