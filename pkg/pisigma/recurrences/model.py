"""Recurrences, creative-telescoping certificates and recurrence solution sets"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement

from pisigma.algebra.context import AlgebraContext, get_context
from pisigma.errors import PoleError
from pisigma.evaluation.oracle import Evaluator
from pisigma.evaluation.render import frac_to_expr, to_expression
from pisigma.evaluation.spec import EvalSpec
from pisigma.expr.nodes import Expr, Param, add
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound
from pisigma.expr.transform import substitute
from pisigma.field.combination import Combination
from pisigma.field.tower import Tower


@dataclass(frozen=True)
class Certificate:
    """
    Container for a creative-telescoping certificate.

    sum_i coefficients[i] * F(n+i, k) = G(k+1) - G(k) for k >= lower, where
    coefficients are expressions in n and G is an expression in k and n.
    """
    index: str
    summand: Expr
    coefficients: Tuple[Expr, ...]
    antidifference: Expr
    lower: int


@dataclass(frozen=True)
class Recurrence:
    """
    Container for c_0(n) A(n) + ... + c_d(n) A(n+d) = rhs(n), valid for n >= validity.

    Coefficients are polynomials in n over Q(params), stored as field elements.
    """
    unknown: str
    var: str
    params: Tuple[ParamBound, ...]
    coefficients: Tuple[FracElement, ...]
    rhs: Expr
    validity: int = 0
    certificate: Optional[Certificate] = None

    @property
    def ctx(self) -> AlgebraContext:
        return get_context(self.var, tuple(p.name for p in self.params))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient_exprs(self) -> Tuple[Expr, ...]:
        return tuple(frac_to_expr(self.ctx, c) for c in self.coefficients)

    def shifted_unknown(self, i: int) -> str:
        return f"{self.unknown}({self.var}+{i})" if i else f"{self.unknown}({self.var})"

    def describe(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficient_exprs()):
            terms.append(f"({pretty(c)})*{self.shifted_unknown(i)}")
        return f"{' + '.join(terms)} = {pretty(self.rhs)}"

    def residual(self, values: Sequence[Fraction], n: int, env: Mapping[str, int], evaluator: Evaluator) -> Fraction:
        """
        lhs - rhs at one point.

        Args:
            values: A(n), ..., A(n+d)
            n: Value of the recurrence variable
            env: Parameter values
            evaluator: Memo for the right-hand side
        """
        point = dict(env)
        point[self.var] = n
        total = Fraction(0)
        for c, value in zip(self.coefficient_exprs(), values):
            total += evaluator.evaluate(c, point) * value
        return total - evaluator.evaluate(self.rhs, point)

    def homogeneous(self) -> "Recurrence":
        return Recurrence(self.unknown, self.var, self.params, self.coefficients, add(), self.validity)


@dataclass(frozen=True)
class RecSolutionSet:
    """
    Container for d'Alembertian solutions of a recurrence in one tower.

    particular solves the full recurrence (None when the right-hand side
    could not be handled), each homogeneous member solves the homogeneous one.
    """
    recurrence: Recurrence
    tower: Tower
    spec: EvalSpec
    particular: Optional[Combination]
    homogeneous: Tuple[Combination, ...]
    validity: int = 0

    def render(self, e: Combination) -> Expr:
        return to_expression(self.tower, self.spec, e)

    @property
    def particular_expr(self) -> Optional[Expr]:
        return None if self.particular is None else self.render(self.particular)

    @property
    def homogeneous_exprs(self) -> Tuple[Expr, ...]:
        return tuple(self.render(h) for h in self.homogeneous)


def shift_expr(e: Expr, var: str, amount: int) -> Expr:
    """e with var replaced by var + amount"""
    return substitute(e, {var: add(Param(var), amount)})


def safe_value(evaluator: Evaluator, e: Expr, env: Mapping[str, int]) -> Optional[Fraction]:
    try:
        return evaluator.evaluate(e, env)
    except PoleError:
        return None
