"""
Command-line front end.

    congruent-census symbol --kind quartic --args 10 13
    congruent-census redei --n 65
    congruent-census classify --n 65 --convention d1
    congruent-census oracle --n 65
    congruent-census matrix-count --k 3
    congruent-census census --x 1000000 --k 2 --out report.json
    congruent-census verify --suite lemmas

Exit status: 0 on success, 2 on invalid input, 3 when a mathematical
consistency check fails.
"""

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional

import structlog
from pydantic import ValidationError

from . import __version__
from .classgroup_oracle import class_group_for_n, oracle_sweep
from .census import run_census
from .config import get_config
from .exceptions import InputError, InternalInconsistency, NotQuarticApplicable
from .f2_matrix import matrix_count_report
from .gaussian import GaussInt
from .genus_theory import FactoredSquarefree, h8_jung_yue, pk_verdict, redei
from .models import CensusConfig, CliInvocation, CliResult, Convention, PrimeFilter
from .monitoring import metrics, setup_structured_logging
from .reporting import render_text, report_to_json, write_report
from .residue_symbols import (
    additive,
    additive_two,
    jacobi,
    legendre_symbol_zi,
    quartic_rational_composite,
    quartic_symbol_composite,
    quartic_symbol_of_two,
)
from .verification import SUITES, run_suite

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3

SYMBOL_KINDS = {
    "quartic": 2,
    "quartic-two": 1,
    "legendre-zi": 2,
    "jacobi": 2,
    "additive": 2,
    "additive-two": 1,
}

GLOBAL_OPTIONS = ("format", "log_level", "seed", "jobs", "metrics_file", "subcommand")


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _int_arg(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise InputError(f"{text!r} is not an integer")


def _gauss_arg(text: str) -> GaussInt:
    try:
        return GaussInt.parse(text)
    except ValueError:
        raise InputError(f"{text!r} is not a Gaussian integer")


def _symbol(options: Dict[str, Any], as_json: bool) -> CliResult:
    kind, args = options["kind"], options["args"]
    if len(args) != SYMBOL_KINDS[kind]:
        raise InputError(f"--kind {kind} takes {SYMBOL_KINDS[kind]} argument(s), got {len(args)}")
    if kind == "quartic":
        alpha, theta = (_gauss_arg(a) for a in args)
        value: Any = None
        # Rational arguments read as (q/p)_4 when every (q/p) = 1.
        if alpha.im == 0 and theta.im == 0 and theta.re > 0 and theta.re % 4 == 1:
            try:
                value = quartic_rational_composite(alpha.re, theta.re)
            except NotQuarticApplicable:
                pass
        if value is None:
            value = quartic_symbol_composite(alpha, theta)
    elif kind == "quartic-two":
        value = quartic_symbol_of_two(_gauss_arg(args[0]))
    elif kind == "legendre-zi":
        value = legendre_symbol_zi(_gauss_arg(args[0]), _gauss_arg(args[1]))
    elif kind == "jacobi":
        value = jacobi(_int_arg(args[0]), _int_arg(args[1]))
    elif kind == "additive":
        value = additive(_int_arg(args[0]), _int_arg(args[1]))
    else:
        value = additive_two(_int_arg(args[0]))
    text = str(value)
    output = json.dumps({"kind": kind, "args": args, "value": text}) if as_json else text
    return CliResult(exit_code=EXIT_OK, output=output)


def _redei(options: Dict[str, Any], as_json: bool) -> CliResult:
    n = FactoredSquarefree.from_int(options["n"])
    r = redei(n)
    if as_json:
        payload = {
            "n": n.n,
            "primes": list(n.primes),
            "A": r.A.to_lists(),
            "b": r.b.to_list(),
            "rank_R": r.rank_R,
            "rank_A": r.rank_A,
            "h4": r.h4,
        }
        return CliResult(exit_code=EXIT_OK, output=json.dumps(payload))
    lines = [
        f"n={n.n} primes={','.join(str(p) for p in n.primes)}",
        f"A={r.A}",
        f"b={r.b}",
        f"rank_R={r.rank_R} rank_A={r.rank_A} h4={r.h4}",
    ]
    return CliResult(exit_code=EXIT_OK, output="\n".join(lines))


def _classify(options: Dict[str, Any], as_json: bool) -> CliResult:
    n = FactoredSquarefree.from_int(options["n"])
    convention = Convention(options["convention"])
    r = redei(n)
    verdict = pk_verdict(n, convention, r)
    if as_json:
        return CliResult(exit_code=EXIT_OK, output=verdict.model_dump_json())
    h8 = "undefined" if verdict.h8 is None else str(verdict.h8)
    lines = [f"h4={verdict.h4} h8={h8} P_k={_flag(verdict.in_Pk)}"]
    if verdict.h8 is not None:
        detail = h8_jung_yue(n, r)
        lines.append(f"case={detail.case_tag.value} d={detail.d} d'={detail.d_prime}")
        lines.append(f"kernel_divisors={','.join(str(d) for d in verdict.d_candidates)}")
    lines.append(
        f"convention={convention.value} "
        f"verdict_d5={_flag(verdict.verdict_d5)} verdict_d1={_flag(verdict.verdict_d1)}"
    )
    return CliResult(exit_code=EXIT_OK, output="\n".join(lines))


def _oracle(options: Dict[str, Any], as_json: bool) -> CliResult:
    if options.get("sweep"):
        mismatches = oracle_sweep(options["sweep"], kmax=options["kmax"], jobs=options["jobs"])
        code = EXIT_INCONSISTENT if mismatches else EXIT_OK
        if as_json:
            output = json.dumps([m.model_dump() for m in mismatches])
        elif mismatches:
            output = "\n".join(
                f"MISMATCH n={m.n} k={m.k} predicted={m.predicted} oracle={m.oracle}"
                for m in mismatches
            )
        else:
            output = f"mismatches=0 x0={options['sweep']} kmax={options['kmax']}"
        return CliResult(exit_code=code, output=output)

    if options.get("n") is None:
        raise InputError("oracle needs --n or --sweep")
    group = class_group_for_n(options["n"])
    if as_json:
        return CliResult(exit_code=EXIT_OK, output=group.model_dump_json())
    lines = [
        f"disc={group.disc} h={group.h}",
        f"divisors={','.join(str(d) for d in group.divisors) or '-'}",
        f"r2={group.r2} r4={group.r4} r8={group.r8} ambiguous_forms={group.ambiguous_forms}",
    ]
    return CliResult(exit_code=EXIT_OK, output="\n".join(lines))


def _matrix_count(options: Dict[str, Any], as_json: bool) -> CliResult:
    report = matrix_count_report(options["k"])
    if as_json:
        return CliResult(exit_code=EXIT_OK, output=report.model_dump_json())
    count_bprime = "-" if report.count_Bprime is None else str(report.count_Bprime)
    lines = [
        f"count_B={report.count_B} count_Bprime={count_bprime} "
        f"formula_B={report.formula_B} formula_Bprime={report.formula_Bprime or '-'} "
        f"enumerated={_flag(report.enumerated)}"
    ]
    for row in report.rank_table:
        enumerated = "-" if row.enumerated is None else str(row.enumerated)
        lines.append(f"rank={row.rank} formula={row.formula} enumerated={enumerated}")
    if report.sigma_B_values:
        lines.append(
            f"sigma_B={','.join(str(v) for v in report.sigma_B_values)} "
            f"expected={report.sigma_B_expected}"
        )
    for disagreement in report.disagreements:
        lines.append(f"DISAGREEMENT {disagreement}")
    return CliResult(exit_code=EXIT_OK, output="\n".join(lines))


def _census(options: Dict[str, Any], as_json: bool) -> CliResult:
    settings = get_config()
    config = CensusConfig(
        x=options["x"],
        k=options["k"],
        filter=PrimeFilter(options["filter"]),
        n_mod8=options["n_mod8"],
        convention=Convention(options["convention"]),
        partitions=options["jobs"],
        checkpoints=options["checkpoints"] or settings.checkpoints,
    )
    report = run_census(config, settings)
    if options.get("out"):
        write_report(report, options["out"])
    if options.get("csv"):
        write_report(report, options["csv"])
    output = report_to_json(report) if as_json else render_text(report)
    return CliResult(exit_code=EXIT_OK, output=output)


def _verify(options: Dict[str, Any], as_json: bool) -> CliResult:
    report = run_suite(
        options["suite"],
        seed=options["seed"],
        samples=options["samples"],
        x=options["x"],
        jobs=options["jobs"],
    )
    code = EXIT_OK if report.passed else EXIT_INCONSISTENT
    if as_json:
        return CliResult(exit_code=code, output=report.model_dump_json())
    lines = [f"suite={report.suite} seed={report.seed} passed={_flag(report.passed)}"]
    for check in report.checks:
        status = "ok" if check.passed else "FAILED"
        lines.append(f"{check.name}: {status} checked={check.checked}")
        lines.extend(f"  {failure}" for failure in check.failures)
    return CliResult(exit_code=code, output="\n".join(lines))


HANDLERS: Dict[str, Callable[[Dict[str, Any], bool], CliResult]] = {
    "symbol": _symbol,
    "redei": _redei,
    "classify": _classify,
    "oracle": _oracle,
    "matrix-count": _matrix_count,
    "census": _census,
    "verify": _verify,
}


def dispatch(invocation: CliInvocation) -> CliResult:
    """Run one subcommand; errors become exit codes instead of tracebacks."""
    as_json = invocation.output_format == "json"
    try:
        return HANDLERS[invocation.subcommand](invocation.options, as_json)
    except (InputError, ValidationError) as e:
        metrics.record_error(error_type=type(e).__name__, component=invocation.subcommand)
        return CliResult(exit_code=EXIT_INPUT, output=f"error: {e}")
    except InternalInconsistency as e:
        metrics.record_error(error_type=type(e).__name__, component=invocation.subcommand)
        logger.error("internal inconsistency", subcommand=invocation.subcommand, error=str(e))
        return CliResult(exit_code=EXIT_INCONSISTENT, output=f"inconsistency: {e}")


def _checkpoint_list(text: str) -> List[int]:
    try:
        return [int(float(part)) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid checkpoint list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    settings = get_config()
    parser = argparse.ArgumentParser(
        prog="congruent-census",
        description="Quartic symbols, Redei matrices, class groups and density census",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--log-level", default=settings.log_level)
    parser.add_argument("--seed", type=int, default=settings.default_seed)
    parser.add_argument("--jobs", type=int, default=settings.default_jobs)
    parser.add_argument("--metrics-file", default=None)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    symbol = sub.add_parser("symbol", help="evaluate one residue symbol")
    symbol.add_argument("--kind", choices=sorted(SYMBOL_KINDS), required=True)
    symbol.add_argument("--args", nargs="+", required=True)

    for name, help_text in (("redei", "Redei matrix and 4-rank"), ("classify", "P_k verdict")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=int, required=True)
        if name == "classify":
            p.add_argument("--convention", choices=[c.value for c in Convention], default="d1")

    oracle = sub.add_parser("oracle", help="2-part of Cl(-4n), or a sweep over Q_k")
    oracle.add_argument("--n", type=int)
    oracle.add_argument("--sweep", type=int, metavar="X0")
    oracle.add_argument("--kmax", type=int, default=3)

    matrix = sub.add_parser("matrix-count", help="symmetric F2 matrix counts")
    matrix.add_argument("--k", type=int, required=True)

    census = sub.add_parser("census", help="density census with checkpoints")
    census.add_argument("--x", type=lambda s: int(float(s)), required=True)
    census.add_argument("--k", type=int, required=True)
    census.add_argument("--filter", choices=[f.value for f in PrimeFilter], default="all")
    census.add_argument("--n-mod8", type=int, default=None)
    census.add_argument("--convention", choices=[c.value for c in Convention], default="d1")
    census.add_argument("--checkpoints", type=_checkpoint_list, default=None)
    census.add_argument("--out", default=None)
    census.add_argument("--csv", default=None)

    verify = sub.add_parser("verify", help="run a property suite")
    verify.add_argument("--suite", choices=list(SUITES), required=True)
    verify.add_argument("--x", type=lambda s: int(float(s)), default=None)
    verify.add_argument("--samples", type=int, default=10_000)
    return parser


def to_invocation(namespace: argparse.Namespace) -> CliInvocation:
    args = vars(namespace)
    options = {key: value for key, value in args.items() if key not in GLOBAL_OPTIONS}
    options.update(seed=args["seed"], jobs=max(1, args["jobs"]))
    return CliInvocation(
        subcommand=args["subcommand"], output_format=args["format"], options=options
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_structured_logging(args.log_level, get_config().log_format)
    invocation = to_invocation(args)
    result = dispatch(invocation)
    stream = sys.stdout if result.exit_code != EXIT_INPUT else sys.stderr
    print(result.output, file=stream)
    if args.metrics_file:
        metrics.write_textfile(args.metrics_file)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
