"""
d'Alembertian solving of recurrences.

The right-hand side is translated into a tower in the recurrence variable
and the operator is factored into first-order factors; every solution is
checked exactly by applying the operator in the final tower.
"""

from typing import Optional

from pisigma.construction.builder import TowerBuilder
from pisigma.errors import PisigmaError, UnsupportedError
from pisigma.evaluation.ev import beta
from pisigma.field.combination import Combination
from pisigma.logging_config import get_logger
from pisigma.recurrences.model import RecSolutionSet, Recurrence
from pisigma.solvers.plde import right_divide, solve_plde

logger = get_logger(__name__)

__all__ = ["apply_operator", "check_solution", "right_divide", "solve_recurrence"]


def apply_operator(recurrence: Recurrence, y: Combination) -> Combination:
    """sum_i c_i sigma^i(y)"""
    total = Combination(y.tower)
    for i, c in enumerate(recurrence.coefficients):
        if c:
            total = total + y.sigma(i).scale(c)
    return total


def check_solution(recurrence: Recurrence, y: Combination, rhs: Optional[Combination] = None) -> bool:
    """Exact check of L(y) = rhs in the tower of y; rhs None means the homogeneous equation"""
    applied = apply_operator(recurrence, y)
    if rhs is None:
        return not applied
    return applied == rhs


def solve_recurrence(recurrence: Recurrence, atomic: Optional[bool] = None) -> RecSolutionSet:
    """
    Particular and homogeneous d'Alembertian solutions of a recurrence.

    Args:
        recurrence: Recurrence with coefficients in K(n)
        atomic: Atomic reduction for the indefinite sums

    Returns:
        Solution set; the particular solution is None when the right-hand
        side lies outside the supported class

    Raises:
        UnsolvedRecurrenceError: the operator has no hypergeometric right factor at some stage
        PisigmaError: a computed solution fails the exact check
    """
    ctx = recurrence.ctx
    builder = TowerBuilder(ctx, atomic=atomic)
    rhs: Optional[Combination]
    try:
        rhs = builder.translate(recurrence.rhs)
    except UnsupportedError as e:
        logger.warning(f"Right-hand side not translatable, solving the homogeneous recurrence only: {e}")
        rhs = None
    tower, spec = builder.tower, builder.spec
    keys = rhs.keys if rhs is not None else ()

    if recurrence.order == 0:
        if rhs is None:
            raise UnsupportedError("order 0 recurrence with untranslatable right-hand side")
        particular = rhs.scale(1 / recurrence.coefficients[0])
        validity = max(recurrence.validity, rhs.validity, beta(tower, spec, particular))
        return RecSolutionSet(recurrence, tower, spec, particular, (), validity)

    solution = solve_plde(tower, spec, recurrence.coefficients, [rhs.part(key) for key in keys])
    tower, spec = solution.tower, solution.spec
    particular = None
    if rhs is not None:
        particular = Combination(tower, dict(zip(keys, solution.particular)))
        rhs = rhs.lift(tower)
    homogeneous = tuple(Combination.of(h) for h in solution.homogeneous)

    for h in homogeneous:
        if not check_solution(recurrence, h):
            raise PisigmaError("homogeneous solution fails the exact check")
    if particular is not None and not check_solution(recurrence, particular, rhs):
        raise PisigmaError("particular solution fails the exact check")

    validity = max([recurrence.validity] + [beta(tower, spec, h) for h in homogeneous])
    if particular is not None:
        validity = max(validity, rhs.validity, beta(tower, spec, particular))
    logger.info(f"Recurrence solved: {len(homogeneous)} homogeneous solution(s), valid from {validity}")
    return RecSolutionSet(recurrence, tower, spec, particular, homogeneous, validity)
