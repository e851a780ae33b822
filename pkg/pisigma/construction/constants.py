"""
Exact values of expressions free of the difference variable.

Rational parts land in K = Q(params); everything else is carried as an
opaque key of a Combination over the base tower:

- factorials of parameter-linear arguments reduce to key(L!) times a
  rational factor, binomials and Pochhammer symbols go through factorials
- (-1)^(linear form) splits into (-1)^const and one sign key per parameter
- harmonic sums and sums/products with parameter-dependent upper bound
  reduce to a key at the homogeneous bound plus explicit boundary terms
- concrete ranges are expanded
"""

from typing import Dict

from sympy.polys.fields import FracElement

from pisigma.algebra.context import AlgebraContext
from pisigma.errors import EvaluationError, PoleError, UnsupportedError, ValidationError
from pisigma.evaluation.oracle import Evaluator
from pisigma.expr.linear import LinearForm, integer_linear_form
from pisigma.expr.nodes import (
    Add,
    Binom,
    Expr,
    Factorial,
    HarmonicS,
    Infinity,
    Mul,
    Num,
    Param,
    Pochhammer,
    Pow,
    Prod,
    SignPow,
    Sum,
    Var,
    add,
    mul,
    num,
    power,
)
from pisigma.expr.transform import substitute
from pisigma.field.combination import Combination
from pisigma.field.tower import Tower, base_tower
from pisigma.logging_config import get_logger

logger = get_logger(__name__)


def form_value(ctx: AlgebraContext, form: LinearForm) -> FracElement:
    """The field element of a linear form in the context's symbols"""
    value = ctx.const(form.const)
    for name, coeff in form.coeffs:
        if name not in ctx.names:
            raise ValidationError(f"symbol {name!r} is not declared")
        value = value + ctx.const(coeff) * ctx.gen(name)
    return value


def rising(value: FracElement, count: int) -> FracElement:
    """value * (value + 1) * ... * (value + count - 1) for count >= 0"""
    # a zero FracElement plus an int is a plain int, so add field elements only
    field = value.field
    result = field.one
    for j in range(count):
        result = result * (value + field(j))
    return result


def factorial_ratio(value: FracElement, step: int) -> FracElement:
    """(value + step)! / value! as a rational function"""
    field = value.field
    if step >= 0:
        return rising(value + field.one, step)
    denominator = rising(value + field(step + 1), -step)
    if not denominator:
        raise PoleError("factorial ratio at a pole")
    return field.one / denominator


def _signed_rising(base: FracElement, count: int) -> FracElement:
    """Pochhammer symbol with an integer count of either sign"""
    if count >= 0:
        return rising(base, count)
    denominator = rising(base + base.field(count), -count)
    if not denominator:
        raise PoleError("pochhammer symbol at a pole")
    return base.field.one / denominator


class ConstantTranslator:
    """Translates variable-free expressions of one context, memoized"""

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        self.tower: Tower = base_tower(ctx)
        self.evaluator = Evaluator()
        self._memo: Dict[Expr, Combination] = {}

    def translate(self, e: Expr) -> Combination:
        cached = self._memo.get(e)
        if cached is None:
            cached = self._translate(e)
            self._memo[e] = cached
        return cached

    def scalar(self, value) -> Combination:
        return Combination.const(self.tower, value)

    def _translate(self, e: Expr) -> Combination:
        ctx = self.ctx
        if isinstance(e, Num):
            return self.scalar(e.value)
        if isinstance(e, (Param, Var)):
            if e.name not in ctx.params:
                raise ValidationError(f"symbol {e.name!r} is not declared")
            return self.scalar(ctx.gen(e.name))
        if isinstance(e, Add):
            result = self.scalar(0)
            for term in e.terms:
                result = result + self.translate(term)
            return result
        if isinstance(e, Mul):
            result = self.scalar(1)
            for factor in e.factors:
                result = result * self.translate(factor)
            return result
        if isinstance(e, Pow):
            return self._power(e)
        if isinstance(e, Factorial):
            return self._factorial(integer_linear_form(e.arg))
        if isinstance(e, Binom):
            return self._binomial(e)
        if isinstance(e, Pochhammer):
            return self._pochhammer(e)
        if isinstance(e, SignPow):
            return self._sign(integer_linear_form(e.arg))
        if isinstance(e, HarmonicS):
            return self._harmonic(e)
        if isinstance(e, (Sum, Prod)):
            return self._range(e)
        if isinstance(e, Infinity):
            raise UnsupportedError("infinite bound in a constant")
        raise UnsupportedError(f"cannot translate {type(e).__name__} as a constant")

    def _power(self, e: Pow) -> Combination:
        base = self.translate(e.base)
        if e.exp >= 0:
            return base ** e.exp
        if not base:
            raise PoleError("division by zero in a constant")
        if base.is_unit():
            return base ** e.exp
        return Combination.atom(self.tower, e.base, e.exp)

    def _factorial(self, form: LinearForm) -> Combination:
        ctx = self.ctx
        shift = int(form.const)
        if form.is_constant():
            if shift < 0:
                raise PoleError(f"factorial of negative integer {shift}")
            return self.scalar(self.evaluator.evaluate(Factorial(num(shift)), {}))
        base = form.homogeneous()
        key = Combination.atom(self.tower, Factorial(base.to_expr()))
        return key.scale(factorial_ratio(form_value(ctx, base), shift))

    def _binomial(self, e: Binom) -> Combination:
        ctx = self.ctx
        top = integer_linear_form(e.top)
        bottom = integer_linear_form(e.bottom)
        for count in (bottom, top - bottom):
            if count.is_constant():
                k = int(count.const)
                if k < 0:
                    return self.scalar(0)
                falling = ctx.one
                top_value = form_value(ctx, top)
                for j in range(k):
                    falling = falling * (top_value - j)
                return self.scalar(falling / rising(ctx.one, k))
        numerator = self._factorial(top)
        denominator = self._factorial(bottom) * self._factorial(top - bottom)
        return numerator * denominator.inverse()

    def _pochhammer(self, e: Pochhammer) -> Combination:
        base = integer_linear_form(e.base)
        count = integer_linear_form(e.count)
        if count.is_constant():
            return self.scalar(_signed_rising(form_value(self.ctx, base), int(count.const)))
        return self._factorial((base + count).shift(-1)) * self._factorial(base.shift(-1)).inverse()

    def _sign(self, form: LinearForm) -> Combination:
        result = self.scalar(-1 if int(form.const) % 2 else 1)
        for name, coeff in form.coeffs:
            if int(coeff) % 2:
                result = result * Combination.atom(self.tower, SignPow(Param(name)))
        return result

    def _split(self, upper: Expr):
        form = integer_linear_form(upper)
        return form.homogeneous(), int(form.const)

    def _harmonic(self, e: HarmonicS) -> Combination:
        base, shift = self._split(e.arg)
        if base.is_constant():
            if shift < 0:
                raise EvaluationError(f"harmonic sum at negative argument {shift}")
            return self.scalar(self.evaluator.harmonic(e.indices, shift))
        base_expr = base.to_expr()
        result = Combination.atom(self.tower, HarmonicS(e.indices, base_expr))
        first, rest = e.indices[0], e.indices[1:]

        def term(j: int) -> Combination:
            point = add(base_expr, j)
            body = power(point, -abs(first))
            if first < 0:
                body = mul(SignPow(point), body)
            if rest:
                body = mul(body, HarmonicS(rest, point))
            return self.translate(body)

        for j in range(1, shift + 1):
            result = result + term(j)
        for j in range(shift + 1, 1):
            result = result - term(j)
        return result

    def _range(self, e) -> Combination:
        if isinstance(e.hi, Infinity):
            raise UnsupportedError("infinite sums are not translated")
        lo = integer_linear_form(e.lo)
        base, shift = self._split(e.hi)
        is_sum = isinstance(e, Sum)
        if not lo.is_constant():
            return Combination.atom(self.tower, e)

        def at(point: Expr) -> Combination:
            return self.translate(substitute(e.body, {e.index: point}))

        start = int(lo.const)
        if base.is_constant():
            result = self.scalar(0 if is_sum else 1)
            for i in range(start, shift + 1):
                value = at(num(i))
                result = result + value if is_sum else result * value
            return result
        base_expr = base.to_expr()
        result = Combination.atom(self.tower, type(e)(e.index, e.lo, base_expr, e.body))
        for j in range(1, shift + 1):
            value = at(add(base_expr, j))
            result = result + value if is_sum else result * value
        for j in range(shift + 1, 1):
            value = at(add(base_expr, j))
            if is_sum:
                result = result - value
            elif value.is_unit():
                result = result * value.inverse()
            else:
                return Combination.atom(self.tower, e)
        return result


def constant_value(ctx: AlgebraContext, e: Expr) -> Combination:
    """Translate a variable-free expression over the base tower of ctx"""
    return ConstantTranslator(ctx).translate(e)
