"""Integer-linear forms over variables and parameters (summation bounds, atom arguments)"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from pisigma.errors import UnsupportedError
from pisigma.expr.nodes import Add, Expr, Mul, Num, Param, Pow, Var, add, mul, num


@dataclass(frozen=True)
class LinearForm:
    """Container for sum(coeffs[v] * v) + const with rational coefficients"""
    coeffs: Tuple[Tuple[str, Fraction], ...] = ()
    const: Fraction = field(default_factory=Fraction)

    @classmethod
    def build(cls, coeffs: Mapping[str, Fraction], const=0) -> "LinearForm":
        items = tuple(sorted((k, Fraction(v)) for k, v in coeffs.items() if v != 0))
        return cls(items, Fraction(const))

    @classmethod
    def constant(cls, value) -> "LinearForm":
        return cls((), Fraction(value))

    @classmethod
    def symbol(cls, name: str) -> "LinearForm":
        return cls(((name, Fraction(1)),), Fraction(0))

    @property
    def mapping(self) -> Dict[str, Fraction]:
        return dict(self.coeffs)

    def coefficient(self, name: str) -> Fraction:
        return self.mapping.get(name, Fraction(0))

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(k for k, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return self.const.denominator == 1 and all(v.denominator == 1 for _, v in self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        merged = self.mapping
        for k, v in other.coeffs:
            merged[k] = merged.get(k, Fraction(0)) + v
        return LinearForm.build(merged, self.const + other.const)

    def __neg__(self) -> "LinearForm":
        return self.scale(-1)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, factor) -> "LinearForm":
        factor = Fraction(factor)
        return LinearForm.build({k: v * factor for k, v in self.coeffs}, self.const * factor)

    def shift(self, amount) -> "LinearForm":
        return LinearForm(self.coeffs, self.const + Fraction(amount))

    def without(self, name: str) -> "LinearForm":
        return LinearForm.build({k: v for k, v in self.coeffs if k != name}, self.const)

    def homogeneous(self) -> "LinearForm":
        """The form without its constant term"""
        return LinearForm(self.coeffs, Fraction(0))

    def substitute(self, values: Mapping[str, "LinearForm"]) -> "LinearForm":
        result = LinearForm.constant(self.const)
        for k, v in self.coeffs:
            part = values.get(k, LinearForm.symbol(k))
            result = result + part.scale(v)
        return result

    def evaluate(self, values: Mapping[str, int]) -> Fraction:
        total = self.const
        for k, v in self.coeffs:
            total += v * values[k]
        return total

    def to_expr(self, bound: Optional[set] = None) -> Expr:
        """Expression with symbols in sorted order; names in `bound` become Var nodes"""
        bound = bound or set()
        terms = []
        for k, v in self.coeffs:
            symbol = Var(k) if k in bound else Param(k)
            terms.append(symbol if v == 1 else mul(num(v), symbol))
        terms.append(num(self.const))
        return add(*terms)


def linear_form(e: Expr) -> LinearForm:
    """
    Read an expression as a linear form.

    Raises:
        UnsupportedError: when the expression is not linear in its symbols
    """
    if isinstance(e, Num):
        return LinearForm.constant(e.value)
    if isinstance(e, (Param, Var)):
        return LinearForm.symbol(e.name)
    if isinstance(e, Add):
        result = LinearForm()
        for term in e.terms:
            result = result + linear_form(term)
        return result
    if isinstance(e, Mul):
        scale = Fraction(1)
        symbolic = None
        for factor in e.factors:
            part = linear_form(factor)
            if part.is_constant():
                scale *= part.const
            elif symbolic is None:
                symbolic = part
            else:
                raise UnsupportedError(f"non-linear product in bound or argument")
        return (symbolic or LinearForm.constant(1)).scale(scale)
    if isinstance(e, Pow):
        base = linear_form(e.base)
        if base.is_constant() and (base.const != 0 or e.exp > 0):
            return LinearForm.constant(base.const ** e.exp)
        if e.exp == 1:
            return base
        raise UnsupportedError("non-linear power in bound or argument")
    raise UnsupportedError(f"{type(e).__name__} is not allowed in a bound or argument")


def integer_linear_form(e: Expr) -> LinearForm:
    form = linear_form(e)
    if not form.is_integral():
        raise UnsupportedError("bound or argument must have integer coefficients")
    return form
