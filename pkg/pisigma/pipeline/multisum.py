"""
Recursive evaluation of definite multi-sums.

For A = sum_{k=lo}^{hi} F(k) with inner sums inside F the driver

1. simplifies the inner sums recursively, the outer index and the
   recursion variable acting as parameters,
2. computes a recurrence for A by creative telescoping,
3. solves it in terms of d'Alembertian solutions,
4. computes as many initial values as the recurrence has order, by brute
   force or by recursion on the remaining parameters, and
5. combines the solutions to match the initial values.

The sum is re-anchored so that the recursion runs over t = hi - lo >= 0.
Every abort surfaces as an EmsFailure naming the step and the sub-sum.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from pisigma.config import get_settings
from pisigma.errors import (
    EmsFailure,
    InconsistentSystemError,
    NoRecurrenceError,
    PisigmaError,
    PoleError,
    UnsolvedRecurrenceError,
    UnsupportedError,
)
from pisigma.evaluation.oracle import Evaluator, SeqOracle, germ_equal, parameter_samples
from pisigma.expr.linear import LinearForm, integer_linear_form
from pisigma.expr.nodes import Expr, Infinity, Param, Sum, add, num
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound, SumRange, SumSpec
from pisigma.expr.transform import all_names, count_nodes, free_symbols, fresh_name, substitute
from pisigma.logging_config import get_logger
from pisigma.recurrences.combine import find_linear_combination
from pisigma.recurrences.creative import generate_recurrence
from pisigma.recurrences.model import Recurrence
from pisigma.recurrences.solve import solve_recurrence

logger = get_logger(__name__)


@dataclass(frozen=True)
class EmsJob:
    """Container for one definite sum to evaluate and its recursion depth"""
    spec: SumSpec
    depth: int = 0

    @property
    def measure(self) -> Tuple[int, int, int]:
        return len(self.spec.ranges), len(self.spec.params), count_nodes(self.spec.summand)


@dataclass(frozen=True)
class EmsResult:
    """
    Container for a closed form, valid for var >= validity.

    var is None when the value does not depend on a recursion variable.
    """
    expr: Expr
    validity: int = 0
    var: Optional[str] = None
    recurrence: Optional[Recurrence] = None


def _substitute_ranges(ranges, mapping: Dict[str, Expr]) -> Tuple[SumRange, ...]:
    return tuple(SumRange(r.index, substitute(r.lo, mapping), substitute(r.hi, mapping)) for r in ranges)


def _instantiate(spec: SumSpec, mapping: Dict[str, Expr], params) -> SumSpec:
    """The SumSpec without its outer range, with symbols replaced"""
    return SumSpec(
        summand=substitute(spec.summand, mapping),
        ranges=_substitute_ranges(spec.ranges[1:], mapping),
        params=tuple(params),
    )


class MultiSumEvaluator:
    """
    Driver of the recursive evaluation.

    Attributes:
        d_max: Largest recurrence order tried
        atomic: Atomic reduction in every tower built on the way
    """

    def __init__(self, d_max: Optional[int] = None, atomic: Optional[bool] = None):
        self.d_max = get_settings().d_max if d_max is None else d_max
        self.atomic = atomic

    def evaluate(self, job: EmsJob) -> EmsResult:
        spec = job.spec
        if not spec.ranges:
            return EmsResult(spec.summand)
        described = spec.describe()
        for r in spec.ranges:
            if isinstance(r.hi, Infinity):
                raise EmsFailure("validate", described, "infinite upper bounds are not supported", exit_code=4)
        whole = spec.to_expr()
        if not free_symbols(whole):
            try:
                return EmsResult(num(Evaluator().evaluate(whole, {})))
            except PoleError as e:
                raise EmsFailure("evaluate", described, str(e), exit_code=4) from e
        outer = spec.ranges[0]
        try:
            lo = integer_linear_form(outer.lo)
            hi = spec.upper_form(0)
        except UnsupportedError as e:
            raise EmsFailure("validate", described, str(e), exit_code=4) from e
        if lo.is_constant() and hi.is_constant():
            return self._expand(job, int(lo.const), int(hi.const))
        candidates = [p.name for p in spec.params if hi.coefficient(p.name) == 1 and lo.coefficient(p.name) == 0]
        if not candidates:
            raise EmsFailure(
                "recursion", described, "no parameter enters the upper bound with coefficient 1", exit_code=4
            )
        return self._recursive(job, candidates[0], lo, hi)

    def _child(self, job: EmsJob, spec: SumSpec) -> EmsResult:
        child = EmsJob(spec, job.depth + 1)
        assert child.measure < job.measure, "recursion measure must decrease"
        return self.evaluate(child)

    def _expand(self, job: EmsJob, lo: int, hi: int) -> EmsResult:
        spec = job.spec
        index = spec.ranges[0].index
        terms = []
        validity, var = 0, None
        for k in range(lo, hi + 1):
            result = self._child(job, _instantiate(spec, {index: num(k)}, spec.params))
            terms.append(result.expr)
            if result.var is not None and result.validity > validity:
                validity, var = result.validity, result.var
        logger.debug(f"Expanded {hi - lo + 1} terms of {spec.describe()}")
        return EmsResult(add(*terms), validity, var)

    def _recursive(self, job: EmsJob, v: str, lo: LinearForm, hi: LinearForm) -> EmsResult:
        spec = job.spec
        described = spec.describe()
        outer = spec.ranges[0]
        rest = hi.without(v)
        taken = all_names(spec.to_expr()) | set(spec.param_names)
        t = fresh_name(taken, "t")
        j = fresh_name(taken | {t}, "j")
        others = [p for p in spec.params if p.name != v]
        logger.info(f"{'  ' * job.depth}Evaluating {described} by recursion in {v}")

        # v = t + lo - rest, k = j + lo
        anchor = {
            v: (LinearForm.symbol(t) + lo - rest).to_expr(),
            outer.index: add(Param(j), lo.to_expr()),
        }
        inner = _instantiate(spec, anchor, [ParamBound(j, 0), ParamBound(t, 0)] + others)

        # Step 1
        summand, shift, t_need = inner.summand, 0, 0
        if inner.ranges:
            simplified = self._child(job, inner)
            summand = simplified.expr
            if simplified.var == j:
                shift = simplified.validity
            elif simplified.var == t:
                t_need = simplified.validity
            elif simplified.validity:
                logger.warning(f"Inner closed form needs {simplified.var} >= {simplified.validity}")

        head: List[Expr] = []
        for j0 in range(shift):
            mapping = {j: num(j0)}
            term = SumSpec(
                substitute(inner.summand, mapping),
                _substitute_ranges(inner.ranges, mapping),
                tuple([ParamBound(t, 0)] + others),
            )
            head.append(self._child(job, term).expr)

        u = fresh_name(taken | {t, j}, "u") if shift else t
        shifted = {t: add(Param(u), shift), j: add(Param(j), shift)} if shift else {}
        body = substitute(summand, shifted)
        original = SumSpec(
            substitute(inner.summand, shifted),
            (SumRange(j, num(0), Param(u)),) + _substitute_ranges(inner.ranges, shifted),
            tuple([ParamBound(u, 0)] + others),
        )

        # Step 2
        try:
            recurrence = generate_recurrence(body, j, u, others, self.d_max, atomic=self.atomic)
        except NoRecurrenceError as e:
            raise EmsFailure("recurrence", described, str(e), exit_code=2) from e
        except UnsupportedError as e:
            raise EmsFailure("recurrence", described, str(e), exit_code=4) from e
        except PisigmaError as e:
            raise EmsFailure("recurrence", described, str(e), exit_code=e.exit_code) from e
        logger.info(f"{'  ' * job.depth}Recurrence of order {recurrence.order} found")

        # Step 3
        try:
            solutions = solve_recurrence(recurrence, atomic=self.atomic)
        except UnsolvedRecurrenceError as e:
            raise EmsFailure("solve", described, str(e), exit_code=3) from e
        except UnsupportedError as e:
            raise EmsFailure("solve", described, str(e), exit_code=4) from e
        if solutions.particular is None:
            raise EmsFailure("solve", described, "right-hand side outside the supported class", exit_code=3)

        # Step 4
        start = max(solutions.validity, t_need - shift, 0)
        initial = [self._initial_value(job, original, u, start + i) for i in range(recurrence.order)]

        # Step 5
        try:
            fitted = find_linear_combination(
                solutions,
                initial,
                start,
                target=original.to_expr(),
                samples=parameter_samples(others, 2),
            )
        except InconsistentSystemError as e:
            raise EmsFailure("combine", described, str(e), exit_code=3) from e

        result = fitted.expr
        if shift:
            result = add(*head, substitute(result, {u: add(Param(t), -shift)}))
        result = substitute(result, {t: (hi - lo).to_expr()})
        bound = LinearForm.constant(fitted.validity + shift) + lo - rest
        if bound.is_constant():
            validity = max(int(bound.const), 0)
        else:
            validity = fitted.validity + shift
            logger.warning(f"Validity in {v} depends on parameters; reporting {validity}")
        result, validity = self._normalize(result, v, others, validity)
        if job.depth == 0:
            self._check(spec, result, v, validity)
        return EmsResult(result, validity, v, recurrence)

    def _initial_value(self, job: EmsJob, original: SumSpec, u: str, point: int) -> Expr:
        """Value of the re-anchored sum at u = point, free of u"""
        instance = _instantiate(original, {u: num(point)}, original.params[1:])
        outer = original.ranges[0]
        if not instance.params:
            whole = Sum(outer.index, num(0), num(point), SumSpec(instance.summand, instance.ranges, ()).to_expr())
            return num(Evaluator().evaluate(whole, {}))
        terms = []
        for j0 in range(point + 1):
            mapping = {outer.index: num(j0)}
            term = SumSpec(
                substitute(instance.summand, mapping), _substitute_ranges(instance.ranges, mapping), instance.params
            )
            result = self._child(job, term)
            if result.validity and result.var is not None:
                logger.warning(f"Initial value term needs {result.var} >= {result.validity}")
            terms.append(result.expr)
        return add(*terms)

    def _normalize(self, e: Expr, v: str, others, validity: int) -> Tuple[Expr, int]:
        from pisigma.pipeline.reduce import sigma_reduce

        try:
            reduced = sigma_reduce(e, v, others, atomic=self.atomic)
        except PisigmaError as exc:
            logger.info(f"Final reduction skipped: {exc}")
            return e, validity
        return reduced.expr, max(validity, reduced.validity)

    def _check(self, spec: SumSpec, result: Expr, v: str, validity: int) -> None:
        settings = get_settings()
        others = [p for p in spec.params if p.name != v]
        target = spec.to_expr()
        stop = validity + settings.recurrence_check_window
        for env in parameter_samples(others, 2):
            if not germ_equal(SeqOracle(dict(env), bounds=others), result, target, validity, stop, var=v):
                raise EmsFailure("verify", spec.describe(), f"closed form disagrees with the sum for {env}", exit_code=1)


def evaluate_multisum(spec: SumSpec, d_max: Optional[int] = None, atomic: Optional[bool] = None) -> EmsResult:
    """
    Closed form of a definite multi-sum.

    Args:
        spec: Nested sum with finite integer-linear bounds
        d_max: Largest recurrence order tried (default from settings)
        atomic: Atomic reduction in the towers built on the way

    Returns:
        Closed form with the least value of its recursion variable

    Raises:
        EmsFailure: a step aborted; carries the step, the sub-sum and the reason
    """
    return MultiSumEvaluator(d_max, atomic).evaluate(EmsJob(spec))
