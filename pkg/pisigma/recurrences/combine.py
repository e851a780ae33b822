"""
Fitting recurrence solutions to initial values.

The target sequence is particular + sum_j w_j * h_j with w_j constant. The
constants may involve opaque keys, so one linear system over K is solved
per key.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Union

from sympy.polys.fields import FracElement

from pisigma.algebra.linalg import constant_domain, solve_linear
from pisigma.config import get_settings
from pisigma.construction.constants import ConstantTranslator
from pisigma.errors import InconsistentSystemError, PisigmaError, PoleError, ValidationError
from pisigma.evaluation.ev import ev_combination
from pisigma.evaluation.oracle import SeqOracle, germ_equal, parameter_samples
from pisigma.evaluation.render import to_expression
from pisigma.expr.nodes import Expr, as_expr
from pisigma.field.combination import UNIT_KEY, Combination, OpaqueKey
from pisigma.field.ring import RingElem
from pisigma.logging_config import get_logger
from pisigma.recurrences.model import RecSolutionSet

logger = get_logger(__name__)

InitialValue = Union[Expr, Fraction, int]


@dataclass(frozen=True)
class FittedSolution:
    """Container for the combination matching the initial values"""
    combination: Combination
    expr: Expr
    validity: int


def _values(translator: ConstantTranslator, value: InitialValue) -> Dict[OpaqueKey, FracElement]:
    comb = translator.translate(as_expr(value))
    return {key: part.rational() for key, part in comb.parts.items()}


def find_linear_combination(
    solutions: RecSolutionSet,
    initial: Sequence[InitialValue],
    start: int,
    target: Optional[Expr] = None,
    samples: Optional[Sequence[dict]] = None,
) -> FittedSolution:
    """
    Particular solution plus the homogeneous combination matching initial values.

    Args:
        solutions: Solutions of the recurrence
        initial: Values of the target at start, start+1, ...; variable-free expressions or numbers
        start: Index of the first initial value, at least the solution validity
        target: Optional expression of the target, compared on extra points
        samples: Parameter instantiations for the comparison

    Returns:
        The fitted combination rendered as expression

    Raises:
        ValidationError: too few initial values, or start below the validity
        InconsistentSystemError: no combination matches, or the comparison fails
    """
    recurrence = solutions.recurrence
    ctx = recurrence.ctx
    tower, spec = solutions.tower, solutions.spec
    homogeneous = [h.lift(tower) for h in solutions.homogeneous]
    if start < solutions.validity:
        raise ValidationError(f"initial values must start at {solutions.validity} or later")
    if len(initial) < len(homogeneous):
        raise ValidationError(f"{len(homogeneous)} initial values needed, got {len(initial)}")
    particular = solutions.particular.lift(tower) if solutions.particular is not None else Combination(tower)
    translator = ConstantTranslator(ctx)

    targets: List[Dict[OpaqueKey, FracElement]] = []
    rows: List[List[FracElement]] = []
    for offset, value in enumerate(initial):
        n = start + offset
        wanted = dict(_values(translator, value))
        for key, known in ev_combination(tower, spec, particular, n).items():
            wanted[key] = wanted.get(key, ctx.zero) - known
        targets.append(wanted)
        rows.append([ev_combination(tower, spec, h, n).get(UNIT_KEY, ctx.zero) for h in homogeneous])

    keys = sorted({key for wanted in targets for key in wanted}, key=repr)
    domain = constant_domain(ctx)
    result = particular
    for key in keys:
        rhs = [wanted.get(key, ctx.zero) for wanted in targets]
        weights = solve_linear(rows, rhs, len(homogeneous), domain)
        if weights is None:
            raise InconsistentSystemError("no combination of the solutions matches the initial values")
        for w, h in zip(weights, homogeneous):
            if w:
                result = result + Combination(tower, {key: RingElem.one(tower)}) * h.scale(w)
    result = result.with_validity(max(start, solutions.validity))
    expr = to_expression(tower, spec, result)
    logger.info(f"Solution fitted to {len(initial)} initial values from {start}")

    if target is not None:
        _cross_validate(solutions, expr, target, start, samples)
    return FittedSolution(result, expr, result.validity)


def _cross_validate(
    solutions: RecSolutionSet, expr: Expr, target: Expr, start: int, samples: Optional[Sequence[dict]]
) -> None:
    recurrence = solutions.recurrence
    settings = get_settings()
    samples = samples if samples is not None else parameter_samples(recurrence.params, 3)
    stop = start + recurrence.order + settings.cross_validation_points
    for env in samples:
        try:
            oracle = SeqOracle(dict(env), bounds=recurrence.params)
            equal = germ_equal(oracle, expr, target, start, stop, var=recurrence.var)
        except PoleError:
            continue
        except PisigmaError as e:
            raise InconsistentSystemError(f"cross-validation could not evaluate: {e}") from e
        if not equal:
            raise InconsistentSystemError(f"fitted solution disagrees with the target for {env}")
