"""
Back-translation of ring elements to expressions.

Supports:
- rational functions as factored expressions (or partial fractions)
- generators rendered through their display templates, or generically as
  products and sums; factorial forms and harmonic sums are recognized
- symbolic rendering by generator names for JSON documents
- evaluation at a shifted symbolic point (value_at)
"""

from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Optional, Union

import sympy
from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from pisigma.algebra.context import AlgebraContext, qq_to_fraction
from pisigma.evaluation.ev import entry
from pisigma.evaluation.oracle import Evaluator
from pisigma.evaluation.spec import EvalSpec
from pisigma.expr.nodes import (
    ONE,
    ZERO,
    Expr,
    Factorial,
    HarmonicS,
    Param,
    Prod,
    SignPow,
    Sum,
    Var,
    add,
    mul,
    num,
    power,
)
from pisigma.expr.transform import all_names, fresh_name, substitute
from pisigma.field.combination import Combination, key_expr
from pisigma.field.ring import RingElem, sigma_apply
from pisigma.field.tower import Generator, Tower
from pisigma.logging_config import get_logger

logger = get_logger(__name__)

CoeffRenderer = Callable[[FracElement], Expr]

_harmonic_values = Evaluator()


def poly_to_expr(ctx: AlgebraContext, p: PolyElement) -> Expr:
    """Expanded polynomial, terms in descending lex order"""
    if not p:
        return ZERO
    symbols = [Param(name) for name in ctx.names]
    terms = []
    for monom, coeff in sorted(p.terms(), key=lambda item: item[0], reverse=True):
        factors = [num(qq_to_fraction(coeff))]
        for symbol, exp in zip(symbols, monom):
            if exp:
                factors.append(power(symbol, exp))
        terms.append(mul(*factors))
    return add(*terms)


def frac_to_expr(ctx: AlgebraContext, c: FracElement) -> Expr:
    """Rational function with factored numerator and denominator"""
    if not c:
        return ZERO
    coeff = Fraction(1)
    factors = []
    for poly, direction in ((c.numer, 1), (c.denom, -1)):
        if poly.is_ground:
            coeff *= qq_to_fraction(poly.LC) ** direction
            continue
        lead, parts = poly.factor_list()
        coeff *= qq_to_fraction(lead) ** direction
        for factor, mult in sorted(parts, key=lambda item: (ctx.x_degree(item[0]), str(item[0]))):
            factors.append(power(poly_to_expr(ctx, factor), mult * direction))
    return mul(num(coeff), *factors)


def from_sympy(expr, ctx: AlgebraContext) -> Expr:
    """Convert a rational sympy expression over the context symbols"""
    if expr.is_Rational:
        return num(Fraction(int(expr.p), int(expr.q)))
    if expr.is_Symbol:
        return Param(str(expr))
    if expr.is_Add:
        return add(*[from_sympy(a, ctx) for a in sympy.Add.make_args(expr)])
    if expr.is_Mul:
        return mul(*[from_sympy(a, ctx) for a in sympy.Mul.make_args(expr)])
    if expr.is_Pow and expr.exp.is_Integer:
        return power(from_sympy(expr.base, ctx), int(expr.exp))
    raise ValueError(f"cannot convert {expr} to an expression")


def apart_to_expr(ctx: AlgebraContext, c: FracElement) -> Expr:
    """Rational function as partial fractions in the variable"""
    if not c:
        return ZERO
    if ctx.is_constant(c):
        return frac_to_expr(ctx, c)
    variable = sympy.Symbol(ctx.var)
    decomposed = sympy.apart(c.as_expr(), variable)
    terms = []
    for term in sympy.Add.make_args(decomposed):
        numer, denom = sympy.fraction(sympy.factor(term))
        terms.append(mul(from_sympy(sympy.expand(numer), ctx), power(from_sympy(denom, ctx), -1)))
    return add(*terms)


class Renderer:
    """Renders elements of one tower; generic displays are memoized per instance"""

    def __init__(self, tower: Tower, spec: EvalSpec, symbolic: bool = False, coeff: Optional[CoeffRenderer] = None):
        self.tower = tower
        self.spec = spec
        self.ctx = tower.ctx
        self.symbolic = symbolic
        self.coeff = coeff or (lambda c: frac_to_expr(self.ctx, c))
        self._displays: Dict[Generator, Expr] = {}

    @property
    def variable(self) -> Param:
        return Param(self.ctx.var)

    def element(self, e: RingElem) -> Expr:
        """Sum over product monomials of (polynomial in the sum generators) * monomial"""
        tower = e.tower
        terms = []
        for pi_key, poly in sorted(e.split_pi().items(), key=lambda item: item[0], reverse=True):
            inner = []
            for (exps, _), c in poly:
                factors = [self.coeff(c)]
                for gen, exp in zip(tower.gens, exps):
                    if exp:
                        factors.append(power(self.generator(gen), exp))
                inner.append(mul(*factors))
            monomial = []
            exps, s = pi_key
            for gen, exp in zip(tower.gens, exps):
                if exp:
                    monomial.append(power(self.generator(gen), exp))
            if s:
                monomial.append(SignPow(self.variable))
            terms.append(mul(add(*inner), *monomial))
        return add(*terms)

    def combination(self, comb: Combination) -> Expr:
        return add(*[mul(key_expr(key), self.element(part)) for key, part in comb])

    def generator(self, gen: Generator) -> Expr:
        if self.symbolic:
            return Param(gen.name)
        if gen in self._displays:
            return self._displays[gen]
        data = entry(self.tower, self.spec, gen)
        if data.display is not None:
            display = data.display
        elif gen.is_pi:
            display = self._product_display(gen)
        else:
            display = self._sum_display(gen)
        self._displays[gen] = display
        return display

    def _index_for(self, body: Expr) -> str:
        return fresh_name(all_names(body) | set(self.ctx.names), "i")

    def _product_display(self, gen: Generator) -> Expr:
        ctx = self.ctx
        data = entry(self.tower, self.spec, gen)
        lower = data.lower
        const = frac_to_expr(ctx, data.const)
        factorial_form = self._factorial_form(gen.ratio, lower)
        if factorial_form is not None:
            return mul(const, factorial_form)
        body = frac_to_expr(ctx, ctx.shift(gen.ratio, -1))
        index = self._index_for(body)
        body = substitute(body, {ctx.var: Var(index)})
        return mul(const, Prod(index, num(lower), self.variable, body))

    def _factorial_form(self, ratio: FracElement, lower: int) -> Optional[Expr]:
        """prod_{i=lower}^{k} ratio(i-1) through factorials when ratio = +-prod (x+b)^m, b integer"""
        ctx = self.ctx
        scale = Fraction(1)
        shifts = []
        for poly, direction in ((ratio.numer, 1), (ratio.denom, -1)):
            lead, parts = poly.factor_list()
            scale *= qq_to_fraction(lead) ** direction
            for factor, mult in parts:
                if ctx.x_degree(factor) != 1 or not factor.coeff_wrt(0, 1).is_ground:
                    return None
                tail = factor.coeff_wrt(0, 0)
                if tail and not tail.is_ground:
                    return None
                a = qq_to_fraction(factor.coeff_wrt(0, 1).LC)
                b = (qq_to_fraction(tail.LC) if tail else Fraction(0)) / a
                if b.denominator != 1:
                    return None
                scale *= a ** (mult * direction)
                shifts.append((int(b), mult * direction))
        if abs(scale) != 1:
            return None
        factors = []
        if scale < 0:
            factors.append(SignPow(add(self.variable, 1 - lower)))
        for b, m in shifts:
            top = Factorial(add(self.variable, b - 1))
            bottom = factorial(lower + b - 2)
            factors.append(power(mul(top, num(Fraction(1, bottom))), m))
        return mul(*factors) if factors else ONE

    def _sum_display(self, gen: Generator) -> Expr:
        ctx = self.ctx
        data = entry(self.tower, self.spec, gen)
        lower = data.lower
        body_elem = sigma_apply(gen.summand.tower, gen.summand, -1)
        harmonic = self._harmonic_form(body_elem, lower, data.const)
        if harmonic is not None:
            return harmonic
        body = self.element(body_elem)
        index = self._index_for(body)
        body = substitute(body, {ctx.var: Var(index)})
        return add(Sum(index, num(lower), self.variable, body), frac_to_expr(ctx, data.const))

    def _harmonic_form(self, body: RingElem, lower: int, const: FracElement) -> Optional[Expr]:
        """c * S_{+-w, rest}(k) + offset when body = c * m^s * x^-w * (T or 1), T displayed as S_rest(k)"""
        ctx = self.ctx
        if len(body) != 1:
            return None
        ((exps, s), c), = body.terms.items()
        used = [i for i, e in enumerate(exps) if e]
        rest = ()
        if used:
            if len(used) > 1 or exps[used[0]] != 1:
                return None
            inner = body.tower.gens[used[0]]
            if not inner.is_sigma:
                return None
            display = self.generator(inner)
            if not isinstance(display, HarmonicS) or display.arg != self.variable:
                return None
            rest = display.indices
        if not ctx.is_constant(c.numer):
            return None
        denom = c.denom
        w = ctx.x_degree(denom)
        if w < 1:
            return None
        lead = denom.coeff_wrt(0, w)
        if lead * ctx.x ** w != denom:
            return None
        scale = ctx.frac(c.numer, lead)
        indices = ((-w if s else w),) + rest
        offset = ctx.const(_harmonic_values.harmonic(indices, lower - 1))
        head = mul(frac_to_expr(ctx, scale), HarmonicS(indices, self.variable))
        return add(head, frac_to_expr(ctx, const - scale * offset))


def to_expression(
    tower: Tower,
    spec: EvalSpec,
    e: Union[RingElem, Combination],
    symbolic: bool = False,
    partial_fractions: bool = False,
) -> Expr:
    """
    Expression in the tower variable with the values of e from beta(e) on.

    Args:
        tower: Tower of e
        spec: Evaluation data
        e: Ring element or combination
        symbolic: Render generators by name instead of their displays
        partial_fractions: Render coefficients as partial fractions
    """
    coeff = (lambda c: apart_to_expr(tower.ctx, c)) if partial_fractions else None
    renderer = Renderer(tower, spec, symbolic=symbolic, coeff=coeff)
    if isinstance(e, Combination):
        return renderer.combination(e)
    return renderer.element(e)


def value_at(
    tower: Tower,
    spec: EvalSpec,
    e: Union[RingElem, Combination],
    shift: int,
    target: FracElement,
    target_expr: Expr,
) -> Expr:
    """
    The value of e at k = target + shift, for a symbolic target in K.

    sigma^shift(e) is rendered with its coefficients evaluated at k = target
    inside the field, so factors that vanish there cancel before the
    generator displays are instantiated.

    Raises:
        PoleError: a coefficient has a genuine pole at the point
    """
    ctx = tower.ctx
    renderer = Renderer(tower, spec, coeff=lambda c: frac_to_expr(ctx, ctx.shift_to(c, target)))
    if isinstance(e, Combination):
        shifted = e.sigma(shift)
        rendered = renderer.combination(shifted)
    else:
        rendered = renderer.element(sigma_apply(tower, e, shift))
    return substitute(rendered, {ctx.var: target_expr})
