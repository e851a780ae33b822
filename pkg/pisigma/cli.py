"""
Command-line front end.

Subcommands: reduce, pfrac, rec, solve-rec, ems, verify, eval. Results go
to stdout (plain, LaTeX or JSON); logs go to stderr and the log file.

Exit codes: 0 success, 1 unexpected error, 2 no telescoper or recurrence,
3 unsolved recurrence or inconsistent system, 4 parse or validation error,
5 undecided product extension check.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError as SchemaError

from pisigma.config import get_settings
from pisigma.documents import recurrence_document, recurrence_from_document, tower_document
from pisigma.errors import EmsFailure, PisigmaError, ValidationError
from pisigma.evaluation.oracle import Evaluator
from pisigma.expr.nodes import Expr, Param, Sum, is_num
from pisigma.expr.parser import parse
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound, sum_spec_from_expr
from pisigma.expr.transform import free_symbols
from pisigma.logging_config import get_logger, setup_logging
from pisigma.pipeline.multisum import evaluate_multisum
from pisigma.pipeline.reduce import partial_fraction_reduce, sigma_reduce
from pisigma.recurrences.combine import find_linear_combination
from pisigma.recurrences.creative import generate_recurrence
from pisigma.recurrences.model import Recurrence
from pisigma.recurrences.solve import solve_recurrence
from pisigma.schemas import CliConfig, EmsFailureDocument, ParamDecl, RecurrenceDocument, ResultDocument, SamplePoint
from pisigma.verify import compare, export_table, verify_recurrence

logger = get_logger(__name__)


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("expression", nargs="?", help="Input expression")
    parent.add_argument("--file", help="Read the input expression from a UTF-8 file")
    parent.add_argument("--param", action="append", default=[], metavar="NAME:LO:HI", help="Declare a parameter; HI may be 'inf'")
    parent.add_argument("--var", help="Main variable (inferred when exactly one symbol is undeclared)")
    parent.add_argument("--dmax", type=int, default=None, help="Largest recurrence order tried")
    parent.add_argument("--window", type=int, default=None, help="Width of the verification window")
    parent.add_argument("--format", choices=["plain", "latex", "json"], default="plain", help="Output format")
    parent.add_argument("--emit-json", metavar="PATH", help="Also write the result document to PATH")
    parent.add_argument("--trace", action="store_true", help="Show solver traces on stderr")
    parent.add_argument("--no-verify", action="store_true", help="Skip the numeric check of the result")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pisigma", description="Exact symbolic summation")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    commands.add_parser("reduce", parents=[common], help="Rewrite in terms of algebraically independent sums")
    commands.add_parser("pfrac", parents=[common], help="reduce with sums split into atomic parts")
    commands.add_parser("rec", parents=[common], help="Recurrence for sum(k,0,n,F) by creative telescoping")

    solve = commands.add_parser("solve-rec", parents=[common], help="Solve a recurrence")
    solve.add_argument("--recurrence", metavar="PATH", help="Recurrence document written by 'rec'")
    solve.add_argument("--initial", help="Comma-separated initial values")
    solve.add_argument("--start", type=int, default=None, help="Index of the first initial value")

    commands.add_parser("ems", parents=[common], help="Evaluate a definite multi-sum")

    verify = commands.add_parser("verify", parents=[common], help="Compare two expressions or re-check a certificate")
    verify.add_argument("--lhs", help="Left-hand side")
    verify.add_argument("--rhs", help="Right-hand side")
    verify.add_argument("--range", metavar="LO:HI", help="Range of the variable")
    verify.add_argument("--certificate", metavar="PATH", help="Recurrence document to re-check")
    verify.add_argument("--table", metavar="PATH", help="Write the compared points as CSV")

    evaluate = commands.add_parser("eval", parents=[common], help="Exact values of an expression")
    evaluate.add_argument("--range", metavar="LO:HI", default="0:10", help="Range of the variable")
    evaluate.add_argument("--at", action="append", default=[], metavar="NAME=VALUE", help="Parameter value")
    return parser


def _assignments(items: Sequence[str]) -> dict:
    env = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"parameter value {item!r} must be NAME=INTEGER")
        env[name.strip()] = value.strip()
    return env


def _config(args: argparse.Namespace) -> CliConfig:
    """Validate a parsed command line into a CliConfig"""
    settings = get_settings()
    text = args.expression or ""
    if args.file:
        text = Path(args.file).read_text(encoding="utf-8").strip()
    return CliConfig(
        command=args.command,
        expression=text,
        params=[ParamDecl.parse(p) for p in args.param],
        var=args.var,
        d_max=settings.d_max if args.dmax is None else args.dmax,
        window=settings.verify_window if args.window is None else args.window,
        output_format=args.format,
        emit_json=args.emit_json,
        trace=args.trace,
        verify=not args.no_verify,
        recurrence_path=getattr(args, "recurrence", None),
        initial=getattr(args, "initial", None),
        start=getattr(args, "start", None),
        lhs=getattr(args, "lhs", None),
        rhs=getattr(args, "rhs", None),
        value_range=getattr(args, "range", None),
        certificate_path=getattr(args, "certificate", None),
        table_path=getattr(args, "table", None),
        at=_assignments(getattr(args, "at", [])),
    )


def _parse_input(config: CliConfig) -> Expr:
    if not config.expression:
        raise ValidationError("no input expression given")
    return parse(config.expression)


def _infer_var(e: Expr, config: CliConfig) -> str:
    declared = {p.name for p in config.params}
    if config.var:
        return config.var
    free = sorted(free_symbols(e) - declared)
    if len(free) != 1:
        raise ValidationError(f"cannot infer the variable from {free or 'no free symbols'}; use --var")
    return free[0]


def _range(text: str) -> tuple:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError as e:
        raise ValidationError(f"range {text!r} must be LO:HI") from e
    if hi < lo:
        raise ValidationError(f"empty range {text!r}")
    return lo, hi


def _write(config: CliConfig, text: str, document) -> None:
    if config.output_format == "json":
        print(document.model_dump_json(indent=2))
    else:
        print(text)
    if config.emit_json:
        Path(config.emit_json).write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote {config.emit_json}")


def _check(config: CliConfig, lhs: Expr, rhs: Expr, var: str, start: int, params: Sequence[ParamBound]) -> Optional[bool]:
    """Germ check of a result against its input; None when skipped"""
    if not config.verify:
        return None
    verdict, _ = compare(lhs, rhs, var, params, start, start + config.window)
    point = verdict.first_difference
    if point is None and not verdict.equal:
        raise PisigmaError(f"result could not be checked: every point of {var}={start}..{start + config.window} is a pole")
    if point is not None:
        raise PisigmaError(f"result disagrees with the input at {var}={point.point}, params {point.params}")
    return True


def _render(e: Expr, config: CliConfig) -> str:
    return pretty(e, "latex" if config.output_format == "latex" else "plain")


def _reduce(config: CliConfig, atomic: bool = False) -> int:
    e = _parse_input(config)
    var = _infer_var(e, config)
    params = config.bounds
    result = partial_fraction_reduce(e, var, params) if atomic else sigma_reduce(e, var, params)
    verified = _check(config, e, result.expr, var, result.validity, params)
    document = ResultDocument(
        command=config.command,
        var=var,
        input=pretty(e),
        result=pretty(result.expr),
        validity=result.validity,
        tower=tower_document(result.tower, result.spec),
        verified=verified,
    )
    _write(config, _render(result.expr, config), document)
    return 0


def _definite_sum(e: Expr, config: CliConfig) -> tuple:
    """(summand, index, var, other params) of sum(k, 0, n, F)"""
    if not isinstance(e, Sum) or not is_num(e.lo, 0) or not isinstance(e.hi, Param):
        raise ValidationError("expected a definite sum of the form sum(k, 0, n, F)")
    var = e.hi.name
    params = [p for p in config.bounds if p.name != var]
    undeclared = free_symbols(e) - {var} - {p.name for p in params}
    if undeclared:
        raise ValidationError(f"undeclared symbols: {', '.join(sorted(undeclared))}")
    return e.body, e.index, var, params


def _rec(config: CliConfig) -> int:
    e = _parse_input(config)
    summand, index, var, params = _definite_sum(e, config)
    recurrence = generate_recurrence(summand, index, var, params, config.d_max, verify=config.verify)
    _write(config, recurrence.describe(), recurrence_document(recurrence))
    return 0


def _solve_rec(config: CliConfig) -> int:
    target: Optional[Expr] = None
    if config.recurrence_path:
        document = RecurrenceDocument.model_validate_json(Path(config.recurrence_path).read_text(encoding="utf-8"))
        recurrence: Recurrence = recurrence_from_document(document)
    else:
        target = _parse_input(config)
        summand, index, var, params = _definite_sum(target, config)
        recurrence = generate_recurrence(summand, index, var, params, config.d_max, verify=config.verify)
    solutions = solve_recurrence(recurrence)
    var = recurrence.var
    start = solutions.validity if config.start is None else config.start
    names = [var] + [p.name for p in recurrence.params]
    if config.initial:
        initial = [parse(text, names) for text in config.initial.split(",")]
    elif target is not None and not recurrence.params:
        evaluator = Evaluator()
        initial = [evaluator.evaluate(target, {var: start + i}) for i in range(recurrence.order)]
    else:
        initial = None

    homogeneous = [pretty(h) for h in solutions.homogeneous_exprs]
    if initial is not None:
        fitted = find_linear_combination(solutions, initial, start, target=target)
        result, validity = fitted.expr, fitted.validity
        if target is not None:
            _check(config, target, result, var, validity, recurrence.params)
    else:
        result = solutions.particular_expr
        validity = solutions.validity
        if result is None:
            raise PisigmaError("no particular solution for the right-hand side")
    document = ResultDocument(
        command=config.command,
        var=var,
        input=config.expression or config.recurrence_path,
        result=pretty(result),
        validity=validity,
        tower=tower_document(solutions.tower, solutions.spec),
        recurrence=recurrence_document(recurrence),
        homogeneous=homogeneous,
        verified=True if target is not None and initial is not None and config.verify else None,
    )
    lines = [_render(result, config)]
    if initial is None:
        lines += [f"homogeneous: {_render(h, config)}" for h in solutions.homogeneous_exprs]
    _write(config, "\n".join(lines), document)
    return 0


def _ems(config: CliConfig) -> int:
    e = _parse_input(config)
    spec = sum_spec_from_expr(e, config.bounds)
    try:
        result = evaluate_multisum(spec, d_max=config.d_max)
    except EmsFailure as failure:
        document = EmsFailureDocument(
            step=failure.step, sub_sum=failure.sub_sum, reason=failure.reason, exit_code=failure.exit_code
        )
        if config.output_format == "json":
            print(document.model_dump_json(indent=2))
        raise
    var = result.var or (config.params[0].name if config.params else "n")
    others = [p for p in config.bounds if p.name != var]
    verified = _check(config, e, result.expr, var, result.validity, others) if result.var else None
    document = ResultDocument(
        command=config.command,
        var=var,
        input=pretty(e),
        result=pretty(result.expr),
        validity=result.validity,
        recurrence=recurrence_document(result.recurrence) if result.recurrence is not None else None,
        verified=verified,
    )
    _write(config, _render(result.expr, config), document)
    return 0


def _point_line(var: str, point: SamplePoint) -> str:
    """n=3 a=2: lhs = rhs, with != on a difference and 'pole' where a side is undefined"""
    prefix = " ".join([f"{var}={point.point}"] + [f"{k}={v}" for k, v in sorted(point.params.items())])
    if point.equal is None:
        return f"{prefix}: pole"
    return f"{prefix}: {point.lhs} {'=' if point.equal else '!='} {point.rhs}"


def _verify(config: CliConfig) -> int:
    if config.certificate_path:
        document = RecurrenceDocument.model_validate_json(Path(config.certificate_path).read_text(encoding="utf-8"))
        verdict = verify_recurrence(recurrence_from_document(document))
        points = []
    else:
        if not (config.lhs and config.rhs):
            raise ValidationError("verify needs --lhs and --rhs, or --certificate")
        lhs, rhs = parse(config.lhs), parse(config.rhs)
        var = _infer_var(lhs + rhs, config)
        start, stop = _range(config.value_range) if config.value_range else (0, config.window)
        verdict, points = compare(lhs, rhs, var, config.bounds, start, stop)
    if config.table_path:
        export_table(points, config.table_path)
    lines = [_point_line(verdict.var, p) for p in points]
    lines.append(verdict.model_dump_json(indent=2))
    _write(config, "\n".join(lines), verdict)
    return 0 if verdict.equal else 1


def _eval(config: CliConfig) -> int:
    e = _parse_input(config)
    env = dict(config.at)
    free = free_symbols(e) - set(env)
    var = config.var or (sorted(free)[0] if len(free) == 1 else None)
    if var is None:
        raise ValidationError("cannot infer the variable; use --var and --at")
    lo, hi = _range(config.value_range or "0:10")
    evaluator = Evaluator()
    rows: List[str] = []
    for k in range(lo, hi + 1):
        point = dict(env)
        point[var] = k
        try:
            rows.append(f"{k}\t{evaluator.evaluate(e, point)}")
        except PisigmaError as exc:
            rows.append(f"{k}\tundefined ({exc})")
    print("\n".join(rows))
    return 0


def run(config: CliConfig) -> int:
    """Dispatch one validated command line and return its exit status"""
    settings = get_settings()
    setup_logging(
        log_level="DEBUG" if config.trace else settings.log_level,
        log_file=settings.log_file,
        console_level="DEBUG" if config.trace else "WARNING",
    )
    logger.info(f"Running {config.command}")
    if config.command == "reduce":
        return _reduce(config)
    if config.command == "pfrac":
        return _reduce(config, atomic=True)
    if config.command == "rec":
        return _rec(config)
    if config.command == "solve-rec":
        return _solve_rec(config)
    if config.command == "ems":
        return _ems(config)
    if config.command == "verify":
        return _verify(config)
    return _eval(config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(_config(args))
    except PisigmaError as e:
        print(f"error: {e}", file=sys.stderr)
        logger.debug(f"{type(e).__name__}: {e}")
        return e.exit_code
    except (SchemaError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
