"""Expression front end: tree, parser, printer, desugaring and linear forms"""

from pisigma.expr.nodes import (
    Expr,
    Num,
    Param,
    Var,
    Add,
    Mul,
    Pow,
    Sum,
    Prod,
    HarmonicS,
    Binom,
    Factorial,
    Pochhammer,
    SignPow,
    Infinity,
    num,
    add,
    mul,
    power,
    neg,
    sub,
    div,
)
from pisigma.expr.parser import parse, check_scope
from pisigma.expr.printer import pretty
from pisigma.expr.desugar import desugar
from pisigma.expr.linear import LinearForm, linear_form, integer_linear_form
from pisigma.expr.transform import substitute, free_symbols, fresh_name, depends_on
from pisigma.expr.sumspec import ParamBound, SumRange, SumSpec, sum_spec_from_expr

__all__ = [
    "Expr",
    "Num",
    "Param",
    "Var",
    "Add",
    "Mul",
    "Pow",
    "Sum",
    "Prod",
    "HarmonicS",
    "Binom",
    "Factorial",
    "Pochhammer",
    "SignPow",
    "Infinity",
    "num",
    "add",
    "mul",
    "power",
    "neg",
    "sub",
    "div",
    "parse",
    "check_scope",
    "pretty",
    "desugar",
    "LinearForm",
    "linear_form",
    "integer_linear_form",
    "substitute",
    "free_symbols",
    "fresh_name",
    "depends_on",
    "ParamBound",
    "SumRange",
    "SumSpec",
    "sum_spec_from_expr",
]
