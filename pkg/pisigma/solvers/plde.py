"""
Higher-order linear difference equations with coefficients in K(x).

solve_plde finds d'Alembertian solutions of sum_i a_i(x) sigma^i(y) = r:
a hypergeometric right factor sigma - rho is split off (Hyper), the left
factor is solved recursively, and each solution w of the left factor is
lifted through sigma(y) - rho * y = w by one product and one indefinite sum.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from sympy.polys.fields import FracElement

from pisigma.algebra.polytools import poly_lcm
from pisigma.errors import UnsolvedRecurrenceError, UnsupportedError
from pisigma.evaluation.spec import EvalSpec
from pisigma.field.extensions import represent_products
from pisigma.field.ring import RingElem, sigma_once
from pisigma.field.tower import Tower
from pisigma.logging_config import get_logger
from pisigma.solvers.hyper import hyper_ratios
from pisigma.solvers.telescope import indefinite_sum

logger = get_logger(__name__)


@dataclass(frozen=True)
class DAlembertSolution:
    """Container for particular solutions (one per right-hand side) and homogeneous solutions"""
    tower: Tower
    spec: EvalSpec
    particular: Tuple[RingElem, ...]
    homogeneous: Tuple[RingElem, ...]


def right_divide(ctx, alphas: Sequence[FracElement], rho: FracElement) -> List[FracElement]:
    """
    The left factor L' with L = L' * (sigma - rho).

    Args:
        ctx: Algebra context
        alphas: a_0..a_d of L
        rho: Ratio of the right factor

    Raises:
        ValueError: sigma - rho is not a right factor of L
    """
    d = len(alphas) - 1
    left = [ctx.zero] * d
    left[d - 1] = alphas[d]
    for i in range(d - 1, 0, -1):
        left[i - 1] = alphas[i] + left[i] * ctx.shift(rho, i)
    if alphas[0] + left[0] * rho:
        raise ValueError("sigma - rho is not a right factor")
    return left


def _polynomial_coefficients(ctx, alphas: Sequence[FracElement]):
    common = ctx.ring.one
    for a in alphas:
        if a:
            common = poly_lcm(ctx, common, a.denom)
    return [a.numer * common.exquo(a.denom) if a else ctx.ring.zero for a in alphas]


def _first_order(
    tower: Tower, spec: EvalSpec, a1: FracElement, a0: FracElement, rhs: Sequence[RingElem]
) -> DAlembertSolution:
    ctx = tower.ctx
    rho = -a0 / a1
    tower, reps, _ = represent_products(tower, [rho])
    h = reps[0].element
    if reps[0].flag < 0:
        h = h * RingElem.sign(tower)
    shifted = sigma_once(h).scale(a1)
    particular = []
    for r in rhs:
        r = r.lift(tower)
        if not r:
            particular.append(RingElem.zero(tower))
            continue
        result = indefinite_sum(tower, spec, r * shifted.inverse())
        tower, spec = result.tower, result.spec
        particular.append(result.g)
    h = h.lift(tower)
    particular = [(h * p.lift(tower)) for p in particular]
    logger.debug(f"First-order factor with ratio {rho.as_expr()} solved")
    return DAlembertSolution(tower, spec, tuple(particular), (h,))


def _solve(tower: Tower, spec: EvalSpec, alphas: List[FracElement], rhs: List[RingElem]) -> DAlembertSolution:
    ctx = tower.ctx
    d = len(alphas) - 1
    if d == 1:
        return _first_order(tower, spec, alphas[1], alphas[0], rhs)
    ratios = hyper_ratios(ctx, _polynomial_coefficients(ctx, alphas), first=True)
    if not ratios:
        raise UnsolvedRecurrenceError(f"no hypergeometric right factor for an operator of order {d}")
    rho = ratios[0]
    left = right_divide(ctx, alphas, rho)
    inner = _solve(tower, spec, left, rhs)
    lifted = _first_order(inner.tower, inner.spec, ctx.one, -rho, list(inner.particular) + list(inner.homogeneous))
    n = len(inner.particular)
    particular = lifted.particular[:n]
    homogeneous = lifted.homogeneous + lifted.particular[n:]
    return DAlembertSolution(lifted.tower, lifted.spec, particular, homogeneous)


def solve_plde(
    tower: Tower, spec: EvalSpec, alphas: Sequence[FracElement], rhs: Sequence[RingElem] = ()
) -> DAlembertSolution:
    """
    d'Alembertian solutions of sum_i alphas[i] * sigma^i(y) = r for each r in rhs.

    Args:
        tower: Tower containing the right-hand sides
        spec: Evaluation data of the tower
        alphas: a_0..a_m in K(x), a_0 and a_m nonzero
        rhs: Right-hand sides

    Returns:
        Extended tower with one particular solution per right-hand side and
        m homogeneous solutions

    Raises:
        UnsupportedError: an end coefficient vanishes
        UnsolvedRecurrenceError: no hypergeometric right factor exists at some stage
    """
    alphas = list(alphas)
    if len(alphas) < 2 or not alphas[0] or not alphas[-1]:
        raise UnsupportedError("operator needs nonzero leading and trailing coefficients")
    rhs = [r.lift(tower) for r in rhs]
    if len(alphas) == 2:
        return _first_order(tower, spec, alphas[1], alphas[0], rhs)
    return _solve(tower, spec, alphas, rhs)

