"""Command line front end: generation, reduction, saturation, witnesses, bounds."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from math import comb

from . import ge3, reduction, structure_checks, theta_solver, witness
from .errors import (
    InternalInconsistencyError,
    InvalidInputError,
    ParseError,
    ResourceLimitError,
)
from .formula import Formula, gen_random, parse_dimacs, render_dimacs

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_INTERNAL = 4


def _read_formula(path: str) -> Formula:
    if path == "-":
        return parse_dimacs(sys.stdin.read())
    with open(path, "r", encoding="ascii") as fh:
        return parse_dimacs(fh.read())


def _write(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args: argparse.Namespace, obj: dict, rows: tuple[list[str], list[list]] | None = None) -> None:
    if args.format == "csv" and rows is not None:
        header, data = rows
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        writer.writerows(data)
        _write(args, buf.getvalue())
    else:
        _write(args, json.dumps(obj, indent=2, default=str) + "\n")


def _cmd_gen(args: argparse.Namespace) -> None:
    formula = gen_random(args.n, args.m, args.seed)
    text = render_dimacs(formula)
    if args.format == "json":
        _write(args, json.dumps({"n": args.n, "m": args.m, "seed": args.seed,
                                 "dimacs": text}, indent=2) + "\n")
    else:
        _write(args, text)


def _cmd_reduce(args: argparse.Namespace) -> None:
    formula = _read_formula(args.input)
    graph = reduction.build_graph(formula, args.variant, args.dense_limit)
    text = reduction.to_dimacs_graph(graph)
    sidecar = reduction.vertex_sidecar(graph)
    if args.format == "json":
        _write(args, json.dumps({"dimacs": text, "sidecar": sidecar}, indent=2) + "\n")
        return
    _write(args, text)
    sidecar_path = args.sidecar
    if sidecar_path is None and getattr(args, "out", None):
        sidecar_path = args.out + ".json"
    if sidecar_path:
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)


def _cmd_ge3(args: argparse.Namespace) -> None:
    formula = _read_formula(args.input)
    closure = ge3.saturate(formula, max_equations=args.cap)
    report = ge3.closure_to_json(closure)
    rows = (["n", "m", "refuted", "equations", "derived"],
            [[formula.n, formula.m, closure.refuted, len(closure.equations),
              len(closure.derived)]])
    _emit(args, report, rows)


def _cmd_witness(args: argparse.Namespace) -> None:
    formula = _read_formula(args.input)
    closure = ge3.saturate(formula)
    if closure.refuted:
        _emit(args, {"verdict": "unsatisfiable",
                     "trace": ge3.closure_to_json(closure)["trace"]},
              (["verdict"], [["unsatisfiable"]]))
        return
    graph = reduction.build_graph(formula, "xor")
    vectors = witness.build_vectors(formula, closure)
    report = witness.verify(vectors, graph, formula, seed=args.seed)
    payload = {
        "verdict": "not-refuted",
        "objective": str(report.objective),
        "ok": report.ok,
        "pairs_checked": report.pairs_checked,
        "violations": [
            {"kind": v.kind, "vertices": list(v.vertices), "detail": v.detail}
            for v in report.violations
        ],
        "witness": witness.witness_to_json(vectors),
    }
    rows = (["verdict", "objective", "ok", "pairs_checked"],
            [["not-refuted", str(report.objective), report.ok, report.pairs_checked]])
    _emit(args, payload, rows)


def _cmd_theta(args: argparse.Namespace) -> None:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="ascii") as fh:
            text = fh.read()
    num, edges = reduction.parse_dimacs_graph(text)
    sol = theta_solver.solve_theta((num, edges), tol=args.tol, max_iter=args.max_iter,
                                   dense_limit=args.dense_limit)
    payload = {
        "value": sol.value,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "residuals": {"psd": sol.residuals.psd, "equality": sol.residuals.equality,
                      "negativity": sol.residuals.negativity},
    }
    rows = (["value", "iterations", "converged", "psd", "equality", "negativity"],
            [[sol.value, sol.iterations, sol.converged, sol.residuals.psd,
              sol.residuals.equality, sol.residuals.negativity]])
    _emit(args, payload, rows)


def _cmd_pattern(args: argparse.Namespace) -> None:
    formula = _read_formula(args.input)
    hits = structure_checks.find_pattern(formula)
    payload = {
        "hits": [
            {
                "indices": list(h.indices),
                "shared": [[l.to_int() for l in pair] for pair in h.shared],
                "thirds": [l.to_int() for l in h.thirds],
            }
            for h in hits
        ],
        "matched_pairs": structure_checks.matched_pair_count(formula),
    }
    rows = (["c1", "c2", "c3", "c4"], [list(h.indices) for h in hits])
    _emit(args, payload, rows)


def _pipeline_report(formula: Formula, seed: int, want_theta: bool, audit: bool,
                     dense_limit: int) -> dict:
    report: dict = {"n": formula.n, "m": formula.m}
    closure = ge3.saturate(formula)
    if closure.refuted:
        report["verdict"] = "unsatisfiable"
        report["trace"] = ge3.closure_to_json(closure)["trace"]
    else:
        report["verdict"] = "not-refuted"
        graph = reduction.build_graph(formula, "xor")
        vectors = witness.build_vectors(formula, closure)
        ver = witness.verify(vectors, graph, formula, seed=seed)
        report["witness_ok"] = ver.ok
        report["objective"] = str(ver.objective)
        report["violations"] = [v.kind for v in ver.violations]
        if want_theta:
            if 4 * formula.m + 1 <= dense_limit:
                sol = theta_solver.solve_theta(graph)
                report["theta"] = {"value": sol.value, "converged": sol.converged,
                                   "iterations": sol.iterations}
            else:
                report["theta"] = "skipped: graph exceeds dense limit"
    hits = structure_checks.find_pattern(formula)
    report["pattern_hits"] = len(hits)
    if audit:
        if formula.n <= structure_checks.BRUTE_FORCE_LIMIT:
            sat = structure_checks.xor_satisfiable(formula)
            report["audit"] = {
                "xor_satisfiable": sat,
                "consistent": not (report["verdict"] == "unsatisfiable" and sat),
            }
        else:
            report["audit"] = "skipped: n exceeds brute force limit"
    return report


def _cmd_pipeline(args: argparse.Namespace) -> None:
    if args.input:
        formula = _read_formula(args.input)
    elif args.n is not None and args.m is not None:
        formula = gen_random(args.n, args.m, args.seed)
    else:
        raise InvalidInputError("pipeline needs --input or both --n and --m")
    report = _pipeline_report(formula, args.seed, args.theta, args.audit, args.dense_limit)
    rows = (["verdict", "witness_ok", "objective", "pattern_hits"],
            [[report["verdict"], report.get("witness_ok"), report.get("objective"),
              report["pattern_hits"]]])
    _emit(args, report, rows)


def expected_matched_pairs(n: int, m: int) -> float:
    """Exact expectation of matched pairs for independent uniform clauses."""
    if n < 4:
        total3 = comb(n, 3)
        p = 1.0 / total3 * 0.5 if total3 else 0.0
        return comb(m, 2) * p
    total3 = comb(n, 3)
    p_two = comb(3, 2) * (n - 3) / total3 * 0.25
    p_three = 1.0 / total3 * 0.5
    return comb(m, 2) * (p_two + p_three)


def _cmd_scan(args: argparse.Namespace) -> None:
    ns = [int(x) for x in args.n_list.split(",") if x]
    if args.m_list:
        m_of = [("m", int(x)) for x in args.m_list.split(",") if x]
    elif args.density_list:
        m_of = [("density", float(x)) for x in args.density_list.split(",") if x]
    else:
        raise InvalidInputError("scan needs --m-list or --density-list")

    cells = []
    for n in ns:
        for kind, val in m_of:
            m = val if kind == "m" else max(0, round(val * n))
            cells.append((n, int(m), None if kind == "m" else val))

    header = ["n", "m", "density", "seeds", "refuted_rate", "witness_ok_rate",
              "pattern_hit_rate", "matched_mean", "matched_expected"]
    if args.theta_limit:
        header += ["theta_mean", "theta_solved"]
    rows = []
    cells_json = []
    for n, m, density in cells:
        refuted = 0
        witness_ok = 0
        pattern_hits = 0
        matched_total = 0
        theta_vals = []
        for off in range(args.seeds):
            seed = args.seed + off
            formula = gen_random(n, m, seed)
            closure = ge3.saturate(formula)
            if closure.refuted:
                refuted += 1
            else:
                graph = reduction.build_graph(formula, "xor")
                vectors = witness.build_vectors(formula, closure)
                if witness.verify(vectors, graph, formula, seed=seed).ok:
                    witness_ok += 1
                if args.theta_limit and 4 * m + 1 <= args.theta_limit:
                    theta_vals.append(theta_solver.solve_theta(graph).value)
            if structure_checks.find_pattern(formula):
                pattern_hits += 1
            matched_total += structure_checks.matched_pair_count(formula)
        k = args.seeds
        cell = {
            "n": n, "m": m, "density": density, "seeds": k,
            "refuted_rate": refuted / k,
            "witness_ok_rate": witness_ok / k,
            "pattern_hit_rate": pattern_hits / k,
            "matched_mean": matched_total / k,
            "matched_expected": expected_matched_pairs(n, m),
        }
        row = [n, m, density, k, refuted / k, witness_ok / k, pattern_hits / k,
               matched_total / k, expected_matched_pairs(n, m)]
        if args.theta_limit:
            mean = sum(theta_vals) / len(theta_vals) if theta_vals else None
            cell["theta_mean"] = mean
            cell["theta_solved"] = len(theta_vals)
            row += [mean, len(theta_vals)]
        cells_json.append(cell)
        rows.append(row)
    _emit(args, {"cells": cells_json}, (header, rows))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cloudtheta",
        description="Random 3CNF tools: cloud graph reductions, a narrow mod-2 "
                    "refutation system, exact vector witnesses, and a vector "
                    "program solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt_default: str = "json") -> None:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "csv"), default=fmt_default)
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("gen", help="generate a random 3CNF formula as DIMACS")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    common(p, fmt_default="dimacs")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("reduce", help="build the cloud graph of a DIMACS formula")
    p.add_argument("input", help="DIMACS CNF path, or - for stdin")
    p.add_argument("--variant", choices=("xor", "full"), default="xor")
    p.add_argument("--dense-limit", type=int, default=reduction.DENSE_LIMIT_DEFAULT)
    p.add_argument("--sidecar", default=None, help="vertex map JSON path")
    common(p, fmt_default="dimacs")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("ge3", help="saturate the formula's parity views")
    p.add_argument("input")
    p.add_argument("--cap", type=int, default=None, help="equation count cap")
    common(p)
    p.set_defaults(func=_cmd_ge3)

    p = sub.add_parser("witness", help="build and verify the exact vector witness")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("theta", help="solve the vector program on a DIMACS graph")
    p.add_argument("input", help="DIMACS 'p edge' path, or - for stdin")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=200_000)
    p.add_argument("--dense-limit", type=int, default=theta_solver.DENSE_LIMIT_DEFAULT)
    common(p)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("pattern", help="find four-clause parity contradictions")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=_cmd_pattern)

    p = sub.add_parser("pipeline", help="gen/parse, saturate, then witness or trace")
    p.add_argument("--input", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--theta", action="store_true", help="also solve the vector program")
    p.add_argument("--audit", action="store_true", help="brute force cross-check (n <= 20)")
    p.add_argument("--dense-limit", type=int, default=theta_solver.DENSE_LIMIT_DEFAULT)
    common(p)
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("scan", help="sweep (n, m) cells over seeds and aggregate rates")
    p.add_argument("--n-list", required=True, help="comma separated n values")
    p.add_argument("--m-list", default=None, help="comma separated m values")
    p.add_argument("--density-list", default=None, help="comma separated m/n ratios")
    p.add_argument("--seeds", type=int, default=10, help="seeds per cell")
    p.add_argument("--theta-limit", type=int, default=0,
                   help="solve the vector program when 4m+1 <= this")
    common(p, fmt_default="csv")
    p.set_defaults(func=_cmd_scan)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ParseError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InternalInconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
