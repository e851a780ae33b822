"""Rewriting of sugar atoms into sum and product primitives"""

from pisigma.errors import ValidationError
from pisigma.expr.nodes import (
    Binom,
    Expr,
    Factorial,
    HarmonicS,
    Pochhammer,
    Pow,
    Prod,
    SignPow,
    Sum,
    Var,
    add,
    children,
    div,
    mul,
    num,
    power,
    rebuild,
    sub,
)
from pisigma.expr.transform import all_names, fresh_name


def harmonic_as_sum(indices, arg: Expr, taken) -> Expr:
    """S_{m1,...}(arg) = sum_{i=1}^{arg} sign(m1)^i / i^|m1| * S_{m2,...}(i)"""
    index = fresh_name(taken, "i")
    first, rest = indices[0], indices[1:]
    i = Var(index)
    body = power(i, -abs(first))
    if first < 0:
        body = mul(SignPow(i), body)
    if rest:
        body = mul(body, harmonic_as_sum(rest, i, set(taken) | {index}))
    return Sum(index, num(1), arg, body)


def desugar(e: Expr) -> Expr:
    """
    Rewrite HarmonicS, Binom, Factorial and Pochhammer into Sum/Prod nodes.

    SignPow stays atomic. Negative powers of sums are rejected afterwards.
    """
    taken = all_names(e)
    result = _desugar(e, taken)
    _reject_sums_in_denominators(result)
    return result


def _desugar(e: Expr, taken) -> Expr:
    kids = children(e)
    if kids:
        e = rebuild(e, tuple(_desugar(c, taken) for c in kids))
    if isinstance(e, HarmonicS):
        return harmonic_as_sum(e.indices, e.arg, taken)
    if isinstance(e, Binom):
        index = fresh_name(taken, "i")
        i = Var(index)
        body = div(add(sub(e.top, i), 1), i)
        return Prod(index, num(1), e.bottom, body)
    if isinstance(e, Factorial):
        index = fresh_name(taken, "i")
        return Prod(index, num(1), e.arg, Var(index))
    if isinstance(e, Pochhammer):
        index = fresh_name(taken, "i")
        return Prod(index, num(1), e.count, add(e.base, Var(index), -1))
    return e


def _contains_sum(e: Expr) -> bool:
    if isinstance(e, (Sum, HarmonicS)):
        return True
    return any(_contains_sum(c) for c in children(e))


def _reject_sums_in_denominators(e: Expr) -> None:
    if isinstance(e, Pow) and e.exp < 0 and _contains_sum(e.base):
        raise ValidationError("sums may only occur polynomially (negative power of a sum)")
    for child in children(e):
        _reject_sums_in_denominators(child)


def check_polynomial_sums(e: Expr) -> None:
    """Reject negative powers of sums without rewriting the tree"""
    _reject_sums_in_denominators(e)
