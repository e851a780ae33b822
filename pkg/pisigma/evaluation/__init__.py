"""Evaluation of tower elements: sequence oracle, ev/beta, and back-translation to expressions"""

from pisigma.evaluation.oracle import (
    Evaluator,
    SeqOracle,
    check_bounds,
    evaluate_expr,
    first_difference,
    germ_equal,
    parameter_samples,
)
from pisigma.evaluation.spec import EvalSpec, GenSpec
from pisigma.evaluation.ev import beta, entry, ev, ev_combination, generator_validity
from pisigma.evaluation.render import Renderer, apart_to_expr, frac_to_expr, to_expression, value_at

__all__ = [
    "Evaluator",
    "SeqOracle",
    "check_bounds",
    "evaluate_expr",
    "first_difference",
    "germ_equal",
    "parameter_samples",
    "EvalSpec",
    "GenSpec",
    "beta",
    "entry",
    "ev",
    "ev_combination",
    "generator_validity",
    "Renderer",
    "apart_to_expr",
    "frac_to_expr",
    "to_expression",
    "value_at",
]
