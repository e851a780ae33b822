"""Definite (multi-)sum specifications extracted from nested input sums"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from pisigma.errors import ValidationError
from pisigma.expr.linear import LinearForm, integer_linear_form
from pisigma.expr.nodes import Expr, Infinity, Sum
from pisigma.expr.printer import pretty
from pisigma.expr.transform import free_symbols


@dataclass(frozen=True)
class ParamBound:
    """Container for a declared parameter with its admissible range"""
    name: str
    lower: int = 0
    upper: Optional[int] = None  # None means unbounded


@dataclass(frozen=True)
class SumRange:
    """Container for one summation quantifier"""
    index: str
    lo: Expr
    hi: Expr  # integer-linear, or Infinity


@dataclass(frozen=True)
class SumSpec:
    """Container for a definite nested sum: ranges ordered outermost first"""
    summand: Expr
    ranges: Tuple[SumRange, ...]
    params: Tuple[ParamBound, ...]

    @property
    def param_names(self) -> Tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def param(self, name: str) -> ParamBound:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_expr(self) -> Expr:
        """The nested Sum expression"""
        result = self.summand
        for r in reversed(self.ranges):
            result = Sum(r.index, r.lo, r.hi, result)
        return result

    def describe(self) -> str:
        return pretty(self.to_expr())

    def upper_form(self, depth: int = 0) -> LinearForm:
        hi = self.ranges[depth].hi
        if isinstance(hi, Infinity):
            raise ValidationError("infinite upper bound")
        return integer_linear_form(hi)


def sum_spec_from_expr(e: Expr, params: Sequence[ParamBound]) -> SumSpec:
    """
    Peel the chain of directly nested sums off an expression.

    Args:
        e: Expression whose top node is a Sum
        params: Declared parameters with bounds

    Returns:
        SumSpec with the innermost non-sum body as summand

    Raises:
        ValidationError: when e is not a sum or a bound is not integer-linear
    """
    if not isinstance(e, Sum):
        raise ValidationError("expected a definite sum")
    ranges: List[SumRange] = []
    declared = {p.name for p in params}
    current = e
    while isinstance(current, Sum):
        if not isinstance(current.hi, Infinity):
            integer_linear_form(current.hi)
        integer_linear_form(current.lo)
        outer = {r.index for r in ranges}
        for bound in (current.lo, current.hi):
            stray = free_symbols(bound) - declared - outer
            if stray:
                raise ValidationError(f"bound uses undeclared symbols: {', '.join(sorted(stray))}")
        ranges.append(SumRange(current.index, current.lo, current.hi))
        current = current.body
    return SumSpec(summand=current, ranges=tuple(ranges), params=tuple(params))
