"""
Shift ratios of hypergeometric atoms.

An atom T(k) (binomial, factorial, Pochhammer symbol, sign power or a
product with rational body) is represented through its shift ratio
T(k+1)/T(k) in K(x); the tower builder anchors it at a start point where
the atom and the ratio are defined.
"""

from sympy.polys.fields import FracElement

from pisigma.algebra.context import AlgebraContext
from pisigma.algebra.polytools import nonnegative_integer_roots
from pisigma.construction.constants import factorial_ratio, form_value
from pisigma.errors import UnsupportedError, ValidationError
from pisigma.expr.linear import LinearForm, integer_linear_form
from pisigma.expr.nodes import (
    Add,
    Binom,
    Expr,
    Factorial,
    Infinity,
    Mul,
    Num,
    Param,
    Pochhammer,
    Pow,
    Prod,
    SignPow,
    Var,
)
from pisigma.expr.transform import substitute


def rational_value(ctx: AlgebraContext, e: Expr) -> FracElement:
    """
    An arithmetic expression as an element of Q(x, params).

    Raises:
        UnsupportedError: the expression contains other node kinds
    """
    if isinstance(e, Num):
        return ctx.const(e.value)
    if isinstance(e, (Param, Var)):
        if e.name not in ctx.names:
            raise ValidationError(f"symbol {e.name!r} is not declared")
        return ctx.gen(e.name)
    if isinstance(e, Add):
        result = ctx.zero
        for term in e.terms:
            result = result + rational_value(ctx, term)
        return result
    if isinstance(e, Mul):
        result = ctx.one
        for factor in e.factors:
            result = result * rational_value(ctx, factor)
        return result
    if isinstance(e, Pow):
        base = rational_value(ctx, e.base)
        if e.exp < 0 and not base:
            raise UnsupportedError("division by zero in a rational expression")
        return base ** e.exp
    raise UnsupportedError(f"{type(e).__name__} is not rational")


def _split(ctx: AlgebraContext, arg: Expr) -> tuple:
    """(coefficient of the variable, field value) of an integer-linear argument"""
    form = integer_linear_form(arg)
    return int(form.coefficient(ctx.var)), form_value(ctx, form)


def shift_ratio(ctx: AlgebraContext, e: Expr) -> FracElement:
    """
    T(x+1)/T(x) for an atom T depending on the context variable.

    Raises:
        UnsupportedError: a product with non-rational body, or bounds that
            are not of the form lo concrete, hi = a*x + offset with a >= 1
    """
    if isinstance(e, Factorial):
        step, value = _split(ctx, e.arg)
        return factorial_ratio(value, step)
    if isinstance(e, Binom):
        u, top = _split(ctx, e.top)
        w, bottom = _split(ctx, e.bottom)
        return factorial_ratio(top, u) / (factorial_ratio(bottom, w) * factorial_ratio(top - bottom, u - w))
    if isinstance(e, Pochhammer):
        b, base = _split(ctx, e.base)
        c, count = _split(ctx, e.count)
        one = ctx.one
        return factorial_ratio(base + count - one, b + c) / factorial_ratio(base - one, b)
    if isinstance(e, SignPow):
        step, _ = _split(ctx, e.arg)
        return ctx.const(-1 if step % 2 else 1)
    if isinstance(e, Prod):
        return _product_ratio(ctx, e)
    raise UnsupportedError(f"{type(e).__name__} is not a hypergeometric atom")


def _product_ratio(ctx: AlgebraContext, e: Prod) -> FracElement:
    if isinstance(e.hi, Infinity):
        raise UnsupportedError("infinite products are not supported")
    if not integer_linear_form(e.lo).is_constant():
        raise UnsupportedError("product lower bound must not depend on the variable")
    upper: LinearForm = integer_linear_form(e.hi)
    step = int(upper.coefficient(ctx.var))
    if step < 1:
        raise UnsupportedError("product upper bound must grow with the variable")
    ratio = ctx.one
    for j in range(1, step + 1):
        point = upper.shift(j).to_expr()
        ratio = ratio * rational_value(ctx, substitute(e.body, {e.index: point}))
    if not ratio:
        raise UnsupportedError("product body vanishes identically")
    return ratio


def anchor_start(ratio: FracElement) -> int:
    """Smallest k such that the ratio has no zero or pole at any integer >= k"""
    roots = set()
    for poly in (ratio.numer, ratio.denom):
        if not poly.is_ground:
            roots |= nonnegative_integer_roots(poly, 0)
    return max(roots) + 1 if roots else 0

