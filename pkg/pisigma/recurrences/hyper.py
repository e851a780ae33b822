"""Hypergeometric solutions of recurrences with polynomial coefficients"""

from dataclasses import dataclass
from typing import List

from sympy.polys.fields import FracElement

from pisigma.algebra.polytools import poly_lcm
from pisigma.evaluation.render import frac_to_expr
from pisigma.expr.nodes import Expr
from pisigma.logging_config import get_logger
from pisigma.recurrences.model import Recurrence
from pisigma.solvers.hyper import hyper_ratios

logger = get_logger(__name__)


@dataclass(frozen=True)
class HyperSolution:
    """Container for a hypergeometric solution h with h(n+1) = ratio(n) * h(n)"""
    ratio: FracElement
    ratio_expr: Expr


def hyper_solutions(recurrence: Recurrence, first: bool = False) -> List[HyperSolution]:
    """
    Hypergeometric solutions of the homogeneous version of a recurrence.

    One ratio is returned per class of solutions that differ by a rational
    factor.

    Raises:
        UnsupportedError: the recurrence has order 0 or a vanishing end coefficient
    """
    ctx = recurrence.ctx
    common = ctx.ring.one
    for c in recurrence.coefficients:
        if c:
            common = poly_lcm(ctx, common, c.denom)
    coeffs = [c.numer * common.exquo(c.denom) if c else ctx.ring.zero for c in recurrence.coefficients]
    ratios = hyper_ratios(ctx, coeffs, first=first)
    logger.info(f"{len(ratios)} hypergeometric solution class(es) for an order {recurrence.order} recurrence")
    return [HyperSolution(r, frac_to_expr(ctx, r)) for r in ratios]
