"""Command-line front end (`ppres`).

Subcommands:
- parse: print the canonical text of each input
- eval: truth value at one t and one assignment
- eliminate: bound every quantifier (`--qfree` removes them all)
- qfree: quantifier-free criterion report and elimination
- check: finite-grid equivalence of two formulas
- count: member counts of a parametric family, with optional fit

Exit codes:
    0  success / equivalence check passed
    1  counterexample found
    2  parse, arity, configuration or other input error
    3  formula fails the quantifier-free criterion
    4  evaluation is missing a variable binding

Results go to standard output; logs go to standard error.
"""

import argparse
import logging
import sys
from typing import Any, Optional, Sequence

from app.config import ConfigurationError, Settings, validate_startup_configuration
from app.engine.eliminate import bound_all_quantifiers
from app.engine.qfree import (
    ExpansionLimitError,
    IneligibleFormulaError,
    describe_violation,
    eliminate_to_qfree,
    qfree_eligible,
)
from app.logic.formula import (
    Formula,
    MissingAssignmentError,
    UnboundedQuantifierError,
    VarId,
    count_unbounded_quantifiers,
    evaluate,
    free_variables,
)
from app.logic.parser import (
    ParseError,
    SourceFormula,
    load_source,
    parse_polynomial,
    print_formula,
    variable_id,
)
from app.logic.poly import Polynomial
from app.models.responses import CommandResult, EligibilityReport, EliminationStats, EquivReport
from app.services.counting import CountingError, count_family, fit_quasi_polynomial
from app.services.oracle import ArityMismatchError, check_equiv, classical_cooper_decide, ground
from app.utils.logging import abbreviate_formula, configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_INPUT_ERROR = 2
EXIT_INELIGIBLE = 3
EXIT_MISSING_BINDING = 4


class UsageError(Exception):
    """Raised for malformed command-line values."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


# --- Input helpers ---


def _sources(args: argparse.Namespace) -> list[SourceFormula]:
    sources = [load_source(path) for path in args.files]
    sources.extend(SourceFormula(text) for text in args.inline or [])
    return sources


def _exactly(args: argparse.Namespace, count: int) -> list[SourceFormula]:
    sources = _sources(args)
    if len(sources) != count:
        raise UsageError(f"{args.command} takes exactly {count} formula(s), got {len(sources)}")
    return sources


def _assignment(phi: Formula, items: Sequence[str]) -> dict[VarId, int]:
    """Parse `name=value` pairs; names are matched against phi's free variables."""
    env: dict[VarId, int] = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"Expected name=value, got {item!r}")
        try:
            env[variable_id(name)] = int(value)
        except ValueError:
            raise UsageError(f"Not an integer: {value!r}") from None
    known = free_variables(phi)
    return {var: value for var, value in env.items() if var in known}


def _t_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    try:
        start, stop = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise UsageError(f"Expected --t-range LO:HI, got {text!r}") from None
    if start < 0 or stop < start:
        raise UsageError(f"Empty or negative t range: {text!r}")
    return range(start, stop + 1)


def _box(text: str) -> tuple[Polynomial, Polynomial]:
    lower, sep, upper = text.partition(",")
    if not sep:
        raise UsageError(f"Expected --box LOWER,UPPER, got {text!r}")
    return parse_polynomial(lower), parse_polynomial(upper)


def _limit(args: argparse.Namespace, default: int) -> int:
    if args.expansion_limit is None:
        return default
    if args.expansion_limit < 0:
        raise UsageError(f"Negative expansion limit: {args.expansion_limit}")
    return args.expansion_limit


def _emit(args: argparse.Namespace, result: CommandResult, text: str) -> None:
    if args.json:
        print(result.model_dump_json(exclude_none=True))
    else:
        print(text)


def _stats_line(stats: EliminationStats) -> str:
    return "# " + " ".join(f"{key}={value}" for key, value in stats.model_dump().items())


def _report_text(report: EligibilityReport) -> str:
    if report.eligible:
        return "eligible"
    return "\n".join(["ineligible"] + [f"  {describe_violation(v)}" for v in report.violations])


# --- Subcommands ---


def cmd_parse(args: argparse.Namespace, config: Settings) -> int:
    sources = _sources(args)
    if not sources:
        raise UsageError("parse needs at least one formula")
    declared = [name.strip() for name in args.declare.split(",")] if args.declare else None
    printed = [print_formula(s.parse(strict=declared is not None, declared=declared)) for s in sources]
    result = CommandResult(command="parse", input=[s.origin for s in sources], result=printed)
    _emit(args, result, "\n".join(printed))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, config: Settings) -> int:
    if args.t < 0:
        raise UsageError("--t must be a natural number")
    (source,) = _exactly(args, 1)
    phi = source.parse()
    env = _assignment(phi, args.assign or [])
    grounded = ground(phi, args.t)
    if count_unbounded_quantifiers(grounded):
        value, method = classical_cooper_decide(grounded, env), "cooper"
    else:
        value, method = evaluate(grounded, args.t, env), "enumeration"
    result = CommandResult(
        command="eval",
        input=[source.origin],
        result={"value": value, "method": method, "t": args.t},
    )
    _emit(args, result, "true" if value else "false")
    return EXIT_OK


def cmd_eliminate(args: argparse.Namespace, config: Settings) -> int:
    (source,) = _exactly(args, 1)
    phi = source.parse()
    logger.debug(f"Eliminating from {source.origin}: {abbreviate_formula(print_formula(phi))}")
    stats = EliminationStats()
    if args.qfree:
        output = eliminate_to_qfree(phi, _limit(args, config.PPRES_QFREE_EXPANSION_LIMIT), stats)
    else:
        output = bound_all_quantifiers(
            phi, expansion_limit=_limit(args, config.PPRES_SIMPLIFY_EXPANSION_LIMIT), stats=stats
        )
    text = print_formula(output)
    result = CommandResult(
        command="eliminate",
        input=[source.origin],
        result={"formula": text},
        stats=stats.model_dump(),
    )
    _emit(args, result, f"{text}\n{_stats_line(stats)}")
    return EXIT_OK


def cmd_qfree(args: argparse.Namespace, config: Settings) -> int:
    (source,) = _exactly(args, 1)
    phi = source.parse()
    if args.report_only:
        report = qfree_eligible(phi)
        result = CommandResult(command="qfree", input=[source.origin], result=report.model_dump())
        _emit(args, result, _report_text(report))
        return EXIT_OK if report.eligible else EXIT_INELIGIBLE
    stats = EliminationStats()
    output = eliminate_to_qfree(phi, _limit(args, config.PPRES_QFREE_EXPANSION_LIMIT), stats)
    text = print_formula(output)
    result = CommandResult(
        command="qfree",
        input=[source.origin],
        result={"formula": text},
        stats=stats.model_dump(),
    )
    _emit(args, result, f"{text}\n{_stats_line(stats)}")
    return EXIT_OK


def _check_text(report: EquivReport) -> str:
    grid = report.grid
    where = f"t in [{grid.t_min}, {grid.t_max}], radius {grid.radius}, {report.points_checked} points"
    if report.witness is None:
        return f"{report.status} ({where})"
    w = report.witness
    values = " ".join([f"t={w.t}"] + [f"{name}={value}" for name, value in w.assignment.items()])
    return f"counterexample {values} (left={str(w.left).lower()}, right={str(w.right).lower()})"


def cmd_check(args: argparse.Namespace, config: Settings) -> int:
    left, right = _exactly(args, 2)
    t_min = args.t_min if args.t_min is not None else config.PPRES_T_MIN
    t_max = args.t_max if args.t_max is not None else config.PPRES_T_MAX
    radius = args.box if args.box is not None else config.PPRES_BOX_RADIUS
    if t_min > t_max:
        raise UsageError(f"--t-min {t_min} exceeds --t-max {t_max}")
    report = check_equiv(left.parse(), right.parse(), range(t_min, t_max + 1), radius, args.threads)
    result = CommandResult(
        command="check",
        input=[left.origin, right.origin],
        result=report.model_dump(exclude_none=True, exclude={"witness"}),
        witness=report.witness,
    )
    _emit(args, result, _check_text(report))
    return EXIT_COUNTEREXAMPLE if report.status == "counterexample" else EXIT_OK


def cmd_count(args: argparse.Namespace, config: Settings) -> int:
    (source,) = _exactly(args, 1)
    phi = source.parse()
    if args.vars:
        variables = [variable_id(name) for name in args.vars.split(",") if name.strip()]
    else:
        variables = sorted(free_variables(phi))
    lower, upper = _box(args.box)
    table = count_family(phi, variables, _t_range(args.t_range), lower, upper, args.threads)

    lines = [f"t={row.t} count={row.count}" + (" truncated" if row.truncated else "") for row in table.rows]
    payload: dict[str, Any] = {"table": table.model_dump()}
    if args.fit:
        modulus, degree = args.fit
        fit = fit_quasi_polynomial(table, modulus, degree, args.tail_from)
        payload["fit"] = fit.model_dump(exclude_none=True)
        lines.append(
            f"fit ({fit.label}) modulus={fit.modulus} degree={fit.degree} "
            f"tail_from={fit.tail_from} exact={str(fit.exact).lower()}"
        )
        for c in fit.classes:
            if c.polynomial is None:
                lines.append(f"  t = {c.residue} mod {fit.modulus}: {c.note}")
            else:
                lines.append(
                    f"  t = {c.residue} mod {fit.modulus}: {c.polynomial}  residuals {' '.join(c.residuals)}"
                )
    result = CommandResult(command="count", input=[source.origin], result=payload)
    _emit(args, result, "\n".join(lines))
    return EXIT_OK


# --- Argument parsing ---


def _add_inputs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("files", nargs="*", help="Formula files (UTF-8)")
    sub.add_argument("--inline", action="append", metavar="TEXT", help="Formula text instead of a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppres",
        description="Quantifier bounding for parametric Presburger arithmetic",
    )
    parser.add_argument("--json", action="store_true", help="Print a machine-readable result envelope")
    parser.add_argument("--log-level", default=None, help="Override PPRES_LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("parse", help="Print canonical formula text")
    _add_inputs(p)
    p.add_argument("--declare", metavar="NAMES", help="Comma-separated allowed free variables (strict mode)")
    p.set_defaults(handler=cmd_parse)

    p = commands.add_parser("eval", help="Evaluate at one t and one assignment")
    _add_inputs(p)
    p.add_argument("--t", type=int, required=True, help="Parameter value (>= 0)")
    p.add_argument("--assign", action="append", metavar="NAME=VALUE", help="Free-variable binding")
    p.set_defaults(handler=cmd_eval)

    p = commands.add_parser("eliminate", help="Bound every unbounded quantifier")
    _add_inputs(p)
    p.add_argument("--qfree", action="store_true", help="Eliminate all quantifiers (eligible formulas only)")
    p.add_argument("--expansion-limit", type=int, default=None, help="Unrolling limit")
    p.set_defaults(handler=cmd_eliminate)

    p = commands.add_parser("qfree", help="Quantifier-free elimination with eligibility report")
    _add_inputs(p)
    p.add_argument("--report-only", action="store_true", help="Only print the eligibility report")
    p.add_argument("--expansion-limit", type=int, default=None, help="Disjunct budget")
    p.set_defaults(handler=cmd_qfree)

    p = commands.add_parser("check", help="Finite-grid equivalence of two formulas")
    _add_inputs(p)
    p.add_argument("--t-min", type=int, default=None)
    p.add_argument("--t-max", type=int, default=None)
    p.add_argument("--box", type=int, default=None, metavar="RADIUS", help="Assignments range over [-RADIUS, RADIUS]")
    p.add_argument("--threads", type=int, default=None, help="Override PPRES_THREADS")
    p.set_defaults(handler=cmd_check)

    p = commands.add_parser("count", help="Count family members in a box")
    _add_inputs(p)
    p.add_argument("--vars", default=None, help="Comma-separated counted variables (default: free variables)")
    p.add_argument("--t-range", default="1:8", help="LO:HI, inclusive")
    p.add_argument("--box", default="0,2t^2+t", help="LOWER,UPPER polynomials in t")
    p.add_argument("--fit", type=int, nargs=2, metavar=("MODULUS", "DEGREE"), default=None)
    p.add_argument("--tail-from", type=int, default=None, help="Smallest t used by --fit")
    p.add_argument("--threads", type=int, default=None, help="Override PPRES_THREADS")
    p.set_defaults(handler=cmd_count)

    return parser


def _error(message: str) -> None:
    print(f"ppres: error: {message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = validate_startup_configuration()
    except ConfigurationError as e:
        _error(e.message)
        return EXIT_INPUT_ERROR
    configure_logging(args.log_level or config.PPRES_LOG_LEVEL, config.PPRES_LOG_FORMAT)
    logger.debug(f"Running {args.command}")

    try:
        return args.handler(args, config)
    except IneligibleFormulaError as e:
        result = CommandResult(command=args.command, result=e.report.model_dump())
        _emit(args, result, _report_text(e.report))
        return EXIT_INELIGIBLE
    except MissingAssignmentError as e:
        _error(e.message)
        return EXIT_MISSING_BINDING
    except ParseError as e:
        _error(str(e))
        return EXIT_INPUT_ERROR
    except (
        ArityMismatchError,
        CountingError,
        ExpansionLimitError,
        UnboundedQuantifierError,
        UsageError,
    ) as e:
        _error(e.message)
        return EXIT_INPUT_ERROR
    except OSError as e:
        _error(f"{e.filename}: {e.strerror}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
