"""Command-line front end: ``python -m cgring <command>``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or data errors.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from tabulate import tabulate

from .config import load_settings
from .errors import CGError, DataFileError, UnknownLabelError, UnknownScenarioError
from .exact import format_univariate, parse_rational
from .pipeline import derive, verify_pipeline, verify_scenarios
from .presentation import cross_check_presentation, load_giambelli
from .report import VerificationReport, merge
from .scenarios import SCENARIOS, get_scenario, run_scenario
from .schubert import MAX_Q_POWER, bruhat_graph, check_label, load_table, verify_table
from .spectral import conjecture_o_check, hyperplane_charpoly, verify_spectral

logger = logging.getLogger(__name__)

SUITES = ("table", "presentation", "scenarios", "pipeline", "spectral")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _emit(args, data: dict, human: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(human)


def _print_report(args, report: VerificationReport) -> int:
    summary = report.summary()
    _emit(
        args,
        report.to_json(),
        f"{report.to_table()}\n\n{report.suite}: {summary['passed']} passed, "
        f"{summary['failed']} failed",
    )
    return report.exit_status


def _settings(args):
    return load_settings().with_files(args.table_file, args.giambelli_file)


def _table(args):
    return load_table(_settings(args).table_file)


def _run_suite(name: str, args) -> VerificationReport:
    table = _table(args)
    if name == "table":
        return verify_table(table)
    if name == "presentation":
        return cross_check_presentation(table, load_giambelli(_settings(args).giambelli_file))
    if name == "scenarios":
        return verify_scenarios(table)
    if name == "pipeline":
        return verify_pipeline(table, load_giambelli(_settings(args).giambelli_file))
    return verify_spectral(table)


def cmd_verify(args) -> int:
    if args.suite == "all":
        report = merge("all", (_run_suite(name, args) for name in SUITES))
    else:
        report = _run_suite(args.suite, args)
    return _print_report(args, report)


def cmd_product(args) -> int:
    table = _table(args)
    product = table.entry(check_label(args.a), check_label(args.b))
    _emit(args, {"a": args.a, "b": args.b, "terms": product.to_json()}, str(product))
    return EXIT_OK


def cmd_gw(args) -> int:
    if not 0 <= args.d <= MAX_Q_POWER:
        raise CGError(f"degree {args.d} outside 0..{MAX_Q_POWER}")
    table = _table(args)
    value = table.gw_invariant(args.d, args.a, args.b, args.c)
    _emit(args, {"d": args.d, "labels": [args.a, args.b, args.c], "value": str(value)}, str(value))
    return EXIT_OK


def cmd_scenario(args) -> int:
    if args.all:
        results = [run_scenario(scenario_id) for scenario_id in SCENARIOS]
    elif args.id:
        results = [run_scenario(args.id)]
    else:
        raise CGError("give a scenario id or --all")
    if len(results) == 1 and not args.all:
        _emit(args, results[0].to_json(), str(results[0]))
        return EXIT_OK
    rows = [
        [r.id, get_scenario(r.id).invariant, r.main, r.correction, r.value] for r in results
    ]
    _emit(
        args,
        {"scenarios": [r.to_json() for r in results]},
        tabulate(rows, headers=["Id", "Invariant", "Main", "Correction", "Value"], tablefmt="github"),
    )
    return EXIT_OK


def cmd_derive(args) -> int:
    report = derive(_table(args))
    rows = [[name, value] for name, value in report.unknowns.items()]
    lines = [tabulate(rows, headers=["Unknown", "Value"], tablefmt="github"), ""]
    lines += [f"R{5 + i}: {relation}" for i, relation in enumerate(report.relations)]
    lines.append(f"relations match the reference: {'yes' if report.relations_match else 'no'}")
    lines += [f"G({label}) = {poly}" for label, poly in report.giambelli.items()]
    lines += [f"contradiction: {message}" for message in report.contradictions]
    lines.append(f"differences from the table: {len(report.diff)}")
    lines += [f"  {d}" for d in report.diff]
    _emit(args, report.to_json(), "\n".join(lines))
    ok = not report.diff and not report.contradictions and report.relations_match
    return EXIT_OK if ok else EXIT_FAILED


def cmd_charpoly(args) -> int:
    q_value = parse_rational(args.q)
    p = hyperplane_charpoly(_table(args), q_value)
    _emit(args, {"q": str(q_value), "charpoly": format_univariate(p)}, format_univariate(p))
    return EXIT_OK


def cmd_conjecture_o(args) -> int:
    report = conjecture_o_check(_table(args))
    lines = [f"charpoly: {format_univariate(report.charpoly)}"]
    if report.y_max is not None:
        lines.append(f"y_max: {report.y_max!r}")
    if report.galkin is not None:
        lines.append(f"T(CG): {report.galkin.value:.10f}")
    lines.append(
        tabulate(
            [[flag, "PASS" if value else "FAIL"] for flag, value in report.flags.items()],
            headers=["Flag", "Status"],
            tablefmt="github",
        )
    )
    lines += report.diagnostics
    _emit(args, report.to_json(), "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_bruhat(args) -> int:
    edges = bruhat_graph(_table(args))
    _emit(
        args,
        {"edges": [{"source": s, "target": t, "multiplicity": m} for s, t, m in edges]},
        tabulate(edges, headers=["Source", "Target", "Multiplicity"], tablefmt="github"),
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgring", description="Quantum cohomology of the Cayley Grassmannian."
    )
    parser.add_argument("--table-file", help="multiplication table JSON (default: cg_table.json)")
    parser.add_argument(
        "--giambelli-file", help="Giambelli dictionary JSON (default: cg_giambelli.json)"
    )
    parser.add_argument("--json", action="store_true", help="print machine-readable JSON")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run verification suites")
    verify.add_argument("--suite", choices=SUITES + ("all",), default="all")
    verify.set_defaults(func=cmd_verify)

    product = commands.add_parser("product", help="quantum product of two Schubert classes")
    product.add_argument("a")
    product.add_argument("b")
    product.set_defaults(func=cmd_product)

    gw = commands.add_parser("gw", help="three-point invariant I_d(a, b, c)")
    gw.add_argument("d", type=int)
    gw.add_argument("a")
    gw.add_argument("b")
    gw.add_argument("c")
    gw.set_defaults(func=cmd_gw)

    scenario = commands.add_parser("scenario", help="degree-one intersection computations")
    scenario.add_argument("id", nargs="?")
    scenario.add_argument("--all", action="store_true")
    scenario.set_defaults(func=cmd_scenario)

    commands.add_parser("derive", help="rebuild the ring from the scenarios").set_defaults(
        func=cmd_derive
    )

    charpoly = commands.add_parser("charpoly", help="characteristic polynomial of sigma_1*")
    charpoly.add_argument("--q", default="1")
    charpoly.set_defaults(func=cmd_charpoly)

    commands.add_parser("conjecture-o", help="spectral checks at q = 1").set_defaults(
        func=cmd_conjecture_o
    )
    commands.add_parser("bruhat", help="Bruhat graph of the classical sigma_1 row").set_defaults(
        func=cmd_bruhat
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        format="%(name)s:%(levelname)s:%(message)s",
        level=logging.DEBUG if args.verbose else logging.WARNING,
    )
    try:
        return args.func(args)
    except (DataFileError, UnknownLabelError, UnknownScenarioError, ValueError) as exc:
        print(f"cgring: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CGError as exc:
        if args.command in ("gw", "scenario"):
            print(f"cgring: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_FAILED
