"""
Pretty printer for expressions.

The plain format is the input grammar itself: parse(pretty(e)) reproduces e
for every tree the parser can build. The latex format is presentation only.
"""

from fractions import Fraction
from functools import lru_cache

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
    MINUS_ONE,
    Var,
    neg,
)

# Precedence levels
ADD, MUL, UNARY, POW, ATOM = range(5)


def pretty(e: Expr, format: str = "plain") -> str:
    """
    Render an expression.

    Args:
        e: Expression tree
        format: 'plain' (re-parseable) or 'latex'

    Returns:
        Rendered text
    """
    if format == "plain":
        return _plain(e)
    if format == "latex":
        return _latex(e)
    raise ValueError(f"unknown format {format!r}")


def _is_negative_term(e: Expr) -> bool:
    if isinstance(e, Num):
        return e.value < 0
    if isinstance(e, Mul) and isinstance(e.factors[0], Num):
        return e.factors[0].value < 0
    return False


def _is_minus(e: Mul) -> bool:
    """-1 times factors that do not start with a number; a lone product factor keeps its parentheses"""
    rest = e.factors[1:]
    if e.factors[0] != MINUS_ONE or isinstance(rest[0], Num):
        return False
    return len(rest) > 1 or not isinstance(rest[0], Mul)


def _negated(term: Expr) -> Expr:
    """Term to print after ' - '; -1*f*g prints as f*g so that subtraction stays readable"""
    if isinstance(term, Mul) and _is_minus(term):
        rest = term.factors[1:]
        return rest[0] if len(rest) == 1 else Mul(rest)
    return neg(term)


def _num_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _precedence(e: Expr) -> int:
    if isinstance(e, Add):
        return ADD
    if isinstance(e, Mul):
        return MUL
    if isinstance(e, Num):
        if e.value < 0:
            return UNARY
        return MUL if e.value.denominator != 1 else ATOM
    if isinstance(e, (Pow, SignPow)):
        return POW
    return ATOM


def _wrap(e: Expr, minimum: int) -> str:
    text = _plain(e)
    return f"({text})" if _precedence(e) < minimum else text


@lru_cache(maxsize=65536)
def _plain(e: Expr) -> str:
    if isinstance(e, Num):
        return _num_text(e.value)
    if isinstance(e, (Param, Var)):
        return e.name
    if isinstance(e, Infinity):
        return "infinity"
    if isinstance(e, Add):
        first = e.terms[0]
        parts = [_wrap(first, MUL if isinstance(first, Add) else ADD)]
        for term in e.terms[1:]:
            if _is_negative_term(term):
                parts.append(" - " + _wrap(_negated(term), MUL))
            else:
                parts.append(" + " + _wrap(term, MUL))
        return "".join(parts)
    if isinstance(e, Mul):
        if len(e.factors) == 2 and _is_minus(e):
            return "-" + _wrap(e.factors[1], POW)
        parts = [_wrap(e.factors[0], UNARY)]
        for factor in e.factors[1:]:
            if isinstance(factor, Pow) and factor.exp == -1:
                divisor = factor.base
                if isinstance(divisor, Num):
                    parts.append(f"/({_plain(divisor)})")
                else:
                    parts.append("/" + _wrap(divisor, ATOM))
            else:
                parts.append("*" + _wrap(factor, POW))
        return "".join(parts)
    if isinstance(e, Pow):
        base = _wrap(e.base, ATOM)
        exponent = str(e.exp) if e.exp >= 0 else f"({e.exp})"
        return f"{base}^{exponent}"
    if isinstance(e, SignPow):
        arg = e.arg
        if isinstance(arg, (Param, Var)):
            text = arg.name
        elif isinstance(arg, Num) and arg.value.denominator == 1:
            # (-1)^(3) would read back as an integer power
            text = f"(({_plain(arg)}))"
        else:
            text = f"({_plain(arg)})"
        return f"(-1)^{text}"
    if isinstance(e, Sum):
        return f"sum({e.index},{_plain(e.lo)},{_plain(e.hi)}, {_plain(e.body)})"
    if isinstance(e, Prod):
        return f"prod({e.index},{_plain(e.lo)},{_plain(e.hi)}, {_plain(e.body)})"
    if isinstance(e, HarmonicS):
        indices = ",".join(str(i) for i in e.indices)
        return f"S[{indices},{_plain(e.arg)}]"
    if isinstance(e, Binom):
        return f"binom({_plain(e.top)},{_plain(e.bottom)})"
    if isinstance(e, Factorial):
        return f"factorial({_plain(e.arg)})"
    if isinstance(e, Pochhammer):
        return f"pochhammer({_plain(e.base)},{_plain(e.count)})"
    raise TypeError(f"cannot print {type(e).__name__}")


def _latex_wrap(e: Expr, minimum: int) -> str:
    text = _latex(e)
    return f"\\left({text}\\right)" if _precedence(e) < minimum else text


def _latex(e: Expr) -> str:
    if isinstance(e, Num):
        v = e.value
        if v.denominator == 1:
            return str(v.numerator)
        sign = "-" if v < 0 else ""
        return f"{sign}\\frac{{{abs(v.numerator)}}}{{{v.denominator}}}"
    if isinstance(e, (Param, Var)):
        return e.name
    if isinstance(e, Infinity):
        return "\\infty"
    if isinstance(e, Add):
        parts = [_latex(e.terms[0])]
        for term in e.terms[1:]:
            if _is_negative_term(term):
                parts.append(" - " + _latex_wrap(neg(term), MUL))
            else:
                parts.append(" + " + _latex_wrap(term, MUL))
        return "".join(parts)
    if isinstance(e, Mul):
        numer, denom = [], []
        for factor in e.factors:
            if isinstance(factor, Pow) and factor.exp < 0:
                denom.append(_latex_wrap(Pow(factor.base, -factor.exp) if factor.exp != -1 else factor.base, POW))
            else:
                numer.append(_latex_wrap(factor, POW))
        top = " ".join(numer) if numer else "1"
        if top.startswith("-1 "):
            top = "-" + top[3:]
        if denom:
            return f"\\frac{{{top}}}{{{' '.join(denom)}}}"
        return top
    if isinstance(e, Pow):
        return f"{_latex_wrap(e.base, ATOM)}^{{{e.exp}}}"
    if isinstance(e, SignPow):
        return f"(-1)^{{{_latex(e.arg)}}}"
    if isinstance(e, Sum):
        return f"\\sum_{{{e.index}={_latex(e.lo)}}}^{{{_latex(e.hi)}}} {_latex_wrap(e.body, MUL)}"
    if isinstance(e, Prod):
        return f"\\prod_{{{e.index}={_latex(e.lo)}}}^{{{_latex(e.hi)}}} {_latex_wrap(e.body, MUL)}"
    if isinstance(e, HarmonicS):
        indices = ",".join(str(i) for i in e.indices)
        return f"S_{{{indices}}}({_latex(e.arg)})"
    if isinstance(e, Binom):
        return f"\\binom{{{_latex(e.top)}}}{{{_latex(e.bottom)}}}"
    if isinstance(e, Factorial):
        return f"{_latex_wrap(e.arg, ATOM)}!"
    if isinstance(e, Pochhammer):
        return f"\\left({_latex(e.base)}\\right)_{{{_latex(e.count)}}}"
    raise TypeError(f"cannot print {type(e).__name__}")
