"""Command line front end.

Subcommands:

* ``eval "<expr>"``: evaluate one expression and print the value.
* ``verify --scenario <name|file> [--n A..B]``: run a claim scenario;
  the builtin ``laws`` target runs the seeded random law suites
  (``--seed``, ``--samples``).
* ``sweep --cube --n N --bound K``: exhaustive grid check of the fiber
  argument.
* ``sigma "<group>"``: print the Bockstein basis of a group expression.

Exit codes: 0 for success (and true comparisons), 1 for a false
comparison or failed report, 2 for any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decorated import ValidityError
from .exprs import (
    EvaluationError,
    ParseError,
    TypeMismatchError,
    evaluate_expr,
    kind_of,
    parse,
    render,
)
from .groups import bockstein_basis
from .harness import (
    Scenario,
    builtin_scenario,
    builtin_scenario_names,
    check_algebra_laws,
    cube_theorem_sweep,
    run_scenario,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimcalc",
        description="Exact calculator for decorated dimension types and Bockstein bases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format", choices=("pretty", "structured"), default="pretty",
            help="output as canonical text or as a JSON tree")

    p_eval = sub.add_parser("eval", help="evaluate one expression")
    p_eval.add_argument("expression")
    add_format(p_eval)

    p_verify = sub.add_parser("verify", help="run a claim scenario or the law suites")
    p_verify.add_argument(
        "--scenario", required=True,
        help="builtin name (%s, laws) or path to a scenario file"
        % ", ".join(builtin_scenario_names()))
    p_verify.add_argument(
        "--n", dest="n_range", metavar="A..B",
        help="bind the parameter n to one value or to every value of a range")
    p_verify.add_argument("--seed", type=int, default=0, help="seed for the laws target")
    p_verify.add_argument(
        "--samples", type=int, default=10000, help="sample count for the laws target")
    add_format(p_verify)

    p_sweep = sub.add_parser("sweep", help="exhaustive checks over finite type grids")
    p_sweep.add_argument("--cube", action="store_true", required=True,
                         help="the two-inequality sweep behind the fiber argument")
    p_sweep.add_argument("--n", type=int, required=True, help="ambient dimension, at least 4")
    p_sweep.add_argument("--bound", type=int, required=True, help="largest base enumerated")
    add_format(p_sweep)

    p_sigma = sub.add_parser("sigma", help="Bockstein basis of a group expression")
    p_sigma.add_argument("group")
    add_format(p_sigma)

    return parser


def _parse_n_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        if sep:
            first, last = int(lo), int(hi)
        else:
            first = last = int(lo)
    except ValueError:
        raise ValidityError(f"--n expects an integer or a range A..B, got {text!r}") from None
    if last < first:
        raise ValidityError(f"empty range {text!r}")
    return list(range(first, last + 1))


def _cmd_eval(args) -> int:
    value = evaluate_expr(parse(args.expression))
    print(render(value, args.format))
    if isinstance(value, bool):
        return 0 if value else 1
    return 0


def _resolve_scenario(name: str) -> Scenario:
    if name in builtin_scenario_names():
        return builtin_scenario(name)
    if Path(name).exists():
        return Scenario.from_path(name)
    known = ", ".join((*builtin_scenario_names(), "laws"))
    raise ValidityError(f"no builtin scenario or file named {name!r} (builtins: {known})")


def _cmd_verify(args) -> int:
    if args.scenario == "laws":
        report = check_algebra_laws(seed=args.seed, samples=args.samples)
        print(report.render(args.format))
        return 0 if report.passed else 1
    scenario = _resolve_scenario(args.scenario)
    if args.n_range is not None:
        runs = [{"n": value} for value in _parse_n_range(args.n_range)]
    else:
        runs = [{}]
    reports = [run_scenario(scenario, bindings) for bindings in runs]
    if args.format == "structured":
        print(json.dumps([r.tree() for r in reports], sort_keys=True))
    else:
        print("\n\n".join(r.render("pretty") for r in reports))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_sweep(args) -> int:
    report = cube_theorem_sweep(args.n, args.bound)
    print(report.render(args.format))
    return 0 if report.passed else 1


def _cmd_sigma(args) -> int:
    expr = parse(args.group)
    if kind_of(expr) != "group":
        raise TypeMismatchError(
            f"sigma needs a group expression, found {kind_of(expr)}", expr.line, expr.column)
    print(render(bockstein_basis(evaluate_expr(expr)), args.format))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse usage errors already print; keep code 2
        return 2 if exit_.code else 0
    handler = {
        "eval": _cmd_eval,
        "verify": _cmd_verify,
        "sweep": _cmd_sweep,
        "sigma": _cmd_sigma,
    }[args.command]
    try:
        return handler(args)
    except (ParseError, TypeMismatchError, ValidityError, EvaluationError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
