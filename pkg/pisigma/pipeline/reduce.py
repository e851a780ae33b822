"""
Reduction of nested sum expressions to algebraically independent sums.

sigma_reduce builds one tower for the whole expression bottom-up: products
become product generators, each sum is telescoped where possible and
otherwise adjoined as a new sum generator, and the result is rendered back
so that every remaining sum corresponds to exactly one generator.

Supports:
- indefinite nested sums in the reduction variable
- definite sums inside the expression (bodies depending on the variable or
  on an enclosing index), evaluated first by the multi-sum driver
- atomic splitting of rational summand parts (partial_fraction_reduce)
"""

from dataclasses import dataclass, replace
from typing import Dict, Optional, Sequence, Tuple

from pisigma.algebra.context import get_context
from pisigma.construction.builder import TowerBuilder
from pisigma.errors import PisigmaError
from pisigma.evaluation.ev import beta
from pisigma.evaluation.render import to_expression
from pisigma.evaluation.spec import EvalSpec
from pisigma.expr.desugar import check_polynomial_sums
from pisigma.expr.linear import integer_linear_form
from pisigma.expr.nodes import Expr, Sum, add, children, num, rebuild
from pisigma.expr.parser import check_scope
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound, sum_spec_from_expr
from pisigma.expr.transform import free_symbols
from pisigma.field.combination import Combination
from pisigma.field.tower import Tower
from pisigma.logging_config import get_logger
from pisigma.solvers.telescope import telescope

logger = get_logger(__name__)

Needs = Dict[str, int]


@dataclass(frozen=True)
class ReduceResult:
    """Container for a reduced expression, valid for var >= validity, with the tower it was read off"""
    expr: Expr
    validity: int
    tower: Tower
    spec: EvalSpec
    combination: Combination


def _merge(needs: Needs, other: Needs) -> Needs:
    merged = dict(needs)
    for name, value in other.items():
        merged[name] = max(merged.get(name, 0), value)
    return merged


class DefiniteSumEliminator:
    """
    Replaces definite sums inside an expression by their closed forms.

    A sum is definite when its body depends on a symbol other than its own
    index and the fixed parameters: the reduction variable or an enclosing
    summation index. Closed forms valid only from some index on make the
    enclosing sum split off its first terms.
    """

    def __init__(self, var: str, params: Sequence[ParamBound], atomic: Optional[bool] = None):
        self.var = var
        self.params = tuple(params)
        self.fixed = {p.name for p in self.params}
        self.atomic = atomic

    def eliminate(self, e: Expr) -> Tuple[Expr, Needs]:
        """The rewritten expression and the least admissible value per symbol"""
        if isinstance(e, Sum):
            return self._sum(e)
        kids = children(e)
        if not kids:
            return e, {}
        needs: Needs = {}
        rewritten = []
        for child in kids:
            new, child_needs = self.eliminate(child)
            rewritten.append(new)
            needs = _merge(needs, child_needs)
        return rebuild(e, tuple(rewritten)), needs

    def _sum(self, e: Sum) -> Tuple[Expr, Needs]:
        body, needs = self.eliminate(e.body)
        need = needs.pop(e.index, None)
        lo = integer_linear_form(e.lo)
        pieces = [Sum(e.index, e.lo, e.hi, body)]
        if need is not None and lo.is_constant() and need > lo.const:
            logger.debug(f"Splitting off the terms {e.index} < {need} of {pretty(e)}")
            pieces = [Sum(e.index, e.lo, num(need - 1), e.body), Sum(e.index, num(need), e.hi, body)]
        result = []
        for piece in pieces:
            value, piece_needs = self._evaluate(piece)
            result.append(value)
            needs = _merge(needs, piece_needs)
        return add(*result), needs

    def _is_definite(self, e: Sum) -> bool:
        return bool(free_symbols(e.body) - {e.index} - (self.fixed - {self.var}))

    def _evaluate(self, e: Sum) -> Tuple[Expr, Needs]:
        if not self._is_definite(e):
            return e, {}
        from pisigma.pipeline.multisum import evaluate_multisum

        bounds = {p.name: p for p in self.params}
        names = sorted(free_symbols(e))
        params = [bounds.get(name, ParamBound(name, 0)) for name in names]
        result = evaluate_multisum(sum_spec_from_expr(e, params), atomic=self.atomic)
        logger.info(f"Definite sum {pretty(e)} evaluated")
        needs = {result.var: result.validity} if result.var and result.validity else {}
        return result.expr, needs


def sigma_reduce(
    e: Expr, var: str, params: Sequence[ParamBound] = (), atomic: Optional[bool] = None
) -> ReduceResult:
    """
    Rewrite e in terms of algebraically independent sums.

    Args:
        e: Nested sum expression in var
        var: Reduction variable
        params: Parameters with bounds
        atomic: Atomic reduction of sum summands (default from settings)

    Returns:
        Reduced expression, valid for var >= validity

    Raises:
        ValidationError: undeclared symbols or sums in denominators
        UnsupportedError: e leaves the nested hypergeometric class
        UndecidedError: a product extension check is undecided
    """
    names = tuple(p.name for p in params)
    check_scope(e, frozenset((var,) + names))
    check_polynomial_sums(e)
    eliminator = DefiniteSumEliminator(var, params, atomic)
    rewritten, needs = eliminator.eliminate(e)
    for name, value in needs.items():
        if name != var:
            logger.warning(f"Closed form needs {name} >= {value}; the declared bound is not adjusted")
    ctx = get_context(var, names)
    builder = TowerBuilder(ctx, atomic=atomic)
    comb = builder.translate(rewritten)
    tower, spec = builder.tower, builder.spec
    validity = max(comb.validity, beta(tower, spec, comb), needs.get(var, 0))
    expr = to_expression(tower, spec, comb)
    logger.info(f"Reduced in a tower with {tower.size} generator(s), valid from {var}={validity}")
    return ReduceResult(expr, validity, tower, spec, comb)


def partial_fraction_reduce(e: Expr, var: str, params: Sequence[ParamBound] = ()) -> ReduceResult:
    """sigma_reduce with every sum split into atomic parts first"""
    return sigma_reduce(e, var, params, atomic=True)


def sigma_generators_independent(tower: Tower) -> bool:
    """True when no sum generator's summand telescopes in the tower below it"""
    for index in tower.sigma_indices:
        below = replace(tower, gens=tower.gens[:index], cache={})
        summand = tower.gens[index].summand
        try:
            if telescope(below, summand.lift(below)) is not None:
                return False
        except PisigmaError as e:
            logger.warning(f"Independence check skipped for {tower.gens[index].name}: {e}")
    return True
