"""
Creative telescoping and recurrence generation for definite sums.

For A(n) = sum_{k=0}^{n} F(n, k) the shifted summands F(n+i, k) are
translated into one tower over K(n)(k) and the first-order solver looks
for c_0..c_d in K(n) and G with

    c_0 F(n, k) + ... + c_d F(n+d, k) = G(k+1) - G(k)

for the least d. Summing over k and moving the boundary terms
F(n+i, n+j) to the right gives the recurrence for A(n).
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement

from pisigma.algebra.context import AlgebraContext, get_context, transfer
from pisigma.algebra.linalg import constant_domain, nullspace
from pisigma.algebra.polytools import poly_lcm
from pisigma.config import get_settings
from pisigma.construction.builder import TowerBuilder
from pisigma.errors import NoRecurrenceError, PisigmaError, PoleError, UnsupportedError, ValidationError
from pisigma.evaluation.ev import beta, ev_combination
from pisigma.evaluation.oracle import Evaluator, parameter_samples
from pisigma.evaluation.render import frac_to_expr, to_expression, value_at
from pisigma.evaluation.spec import EvalSpec
from pisigma.expr.nodes import Expr, Param, Sum, add, mul, neg, num
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound
from pisigma.expr.transform import depends_on, substitute
from pisigma.field.combination import Combination, key_expr
from pisigma.field.ring import RingElem
from pisigma.field.tower import Tower
from pisigma.logging_config import get_logger
from pisigma.recurrences.model import Certificate, Recurrence, safe_value, shift_expr
from pisigma.solvers.fplde import solve_fplde

logger = get_logger(__name__)

CERTIFICATE_POINTS = (5, 8, 13)


@dataclass(frozen=True)
class Telescoper:
    """Container for sum_i c[i] * f_i = sigma(g) - g, valid from lower on"""
    c: Tuple[FracElement, ...]
    g: Combination
    lower: int


def joint_telescopers(tower: Tower, rhs: Sequence[Combination]) -> List[Tuple[List[FracElement], Combination]]:
    """
    Basis of all (c, g) with sigma(g) - g = sum c_i rhs_i, c shared by all opaque keys.

    Each key is solved on its own; the c-parts are then intersected by
    one nullspace computation over K.
    """
    ctx = tower.ctx
    rhs = [r.lift(tower) for r in rhs]
    n = len(rhs)
    keys = sorted({key for r in rhs for key in r.parts}, key=lambda k: pretty(key_expr(k)))
    one = RingElem.one(tower)
    if not keys:
        return [([ctx.one if i == j else ctx.zero for j in range(n)], Combination(tower)) for i in range(n)]
    blocks = []
    for key in keys:
        solutions = solve_fplde(tower, one, -one, [r.part(key) for r in rhs])
        blocks.append((key, solutions))
    if len(blocks) == 1:
        key, solutions = blocks[0]
        return [(list(s.c), Combination(tower, {key: s.g})) for s in solutions]
    offsets = []
    ncols = 0
    for _, solutions in blocks:
        offsets.append(ncols)
        ncols += len(solutions)
    rows = []
    first_offset, (_, first) = offsets[0], blocks[0]
    for offset, (_, solutions) in zip(offsets[1:], blocks[1:]):
        for i in range(n):
            row = [ctx.zero] * ncols
            for j, s in enumerate(first):
                row[first_offset + j] = s.c[i]
            for j, s in enumerate(solutions):
                row[offset + j] = -s.c[i]
            if any(row):
                rows.append(row)
    result = []
    for vector in nullspace(rows, ncols, constant_domain(ctx)):
        c = [ctx.zero] * n
        for j, s in enumerate(first):
            if vector[j]:
                c = [a + vector[j] * b for a, b in zip(c, s.c)]
        parts = {}
        for offset, (key, solutions) in zip(offsets, blocks):
            g = RingElem.zero(tower)
            for j, s in enumerate(solutions):
                weight = vector[offset + j]
                if weight:
                    g = g + s.g.scale(weight)
            parts[key] = g
        result.append((c, Combination(tower, parts)))
    return result


def creative_telescope(tower: Tower, spec: EvalSpec, summands: Sequence[Combination]) -> Optional[Telescoper]:
    """
    Solve c_0 f_0 + ... + c_d f_d = sigma(g) - g with c not all zero.

    Args:
        tower: Tower containing the summands
        spec: Evaluation data of the tower
        summands: f_i representing F(n+i, k) in the variable k

    Returns:
        A telescoper, or None when only c = 0 solves the equation
    """
    summands = [s.lift(tower) for s in summands]
    for c, g in joint_telescopers(tower, summands):
        if any(c):
            lower = max([0, beta(tower, spec, g)] + [max(s.validity, beta(tower, spec, s)) for s in summands])
            return Telescoper(tuple(c), g, lower)
    return None


def _normalize(ctx: AlgebraContext, c: Sequence[FracElement]) -> Tuple[FracElement, List[FracElement]]:
    """Scale making the c_i coprime polynomials, last nonzero one with positive leading coefficient"""
    denominator = ctx.ring.one
    for value in c:
        if value:
            denominator = poly_lcm(ctx, denominator, value.denom)
    numerators = [value.numer * denominator.exquo(value.denom) if value else ctx.ring.zero for value in c]
    content = ctx.ring.zero
    for p in numerators:
        if p:
            content = p if not content else content.gcd(p)
    last = next(p for p in reversed(numerators) if p)
    if (last.exquo(content)).LC < 0:
        content = -content
    scale = ctx.frac(denominator, content)
    return scale, [value * scale for value in c]


def _constant_value_expr(ctx: AlgebraContext, values) -> Expr:
    ordered = sorted(values.items(), key=lambda item: pretty(key_expr(item[0])))
    return add(*[mul(key_expr(key), frac_to_expr(ctx, value)) for key, value in ordered])


def certificate_symbolic(certificate: Certificate, var: str, params: Sequence[ParamBound] = ()) -> Optional[bool]:
    """
    Check the certificate identity as an identity in a tower over K(n)(k).

    Returns:
        True or False, or None when the identity cannot be translated
    """
    k = certificate.index
    ctx = get_context(k, (var,) + tuple(p.name for p in params))
    builder = TowerBuilder(ctx)
    lhs = add(*[mul(c, shift_expr(certificate.summand, var, i)) for i, c in enumerate(certificate.coefficients)])
    difference = add(shift_expr(certificate.antidifference, k, 1), neg(certificate.antidifference))
    try:
        residual = builder.translate(add(lhs, neg(difference)))
    except (UnsupportedError, ValidationError) as e:
        logger.info(f"Certificate not checked symbolically: {e}")
        return None
    return not residual


def certificate_holds(
    certificate: Certificate, var: str, env: dict, n: int, window: int, evaluator: Optional[Evaluator] = None
) -> bool:
    """Check the certificate identity at one n for k in [lower, min(n, lower + window)]; poles are skipped"""
    evaluator = evaluator or Evaluator()
    k = certificate.index
    for point in range(certificate.lower, min(n, certificate.lower + window) + 1):
        base = dict(env)
        base[var] = n
        total = 0
        try:
            for i, c in enumerate(certificate.coefficients):
                shifted = dict(base)
                shifted[var] = n + i
                shifted[k] = point
                total += evaluator.evaluate(c, base) * evaluator.evaluate(certificate.summand, shifted)
            upper = dict(base)
            upper[k] = point + 1
            lower = dict(base)
            lower[k] = point
            difference = evaluator.evaluate(certificate.antidifference, upper) - evaluator.evaluate(
                certificate.antidifference, lower
            )
        except PisigmaError as e:
            logger.warning(f"Skipping certificate point {k}={point}, {var}={n}: {e}")
            continue
        if total != difference:
            logger.debug(f"Certificate fails at {k}={point}, {var}={n}")
            return False
    return True


def recurrence_holds(
    recurrence: Recurrence, summand: Expr, index: str, start: int, window: int, samples: Sequence[dict]
) -> Tuple[Optional[int], int]:
    """
    Check the recurrence against brute-force sums on [start, start + window).

    Returns:
        (first failing n or None, number of points actually compared)
    """
    evaluator = Evaluator()
    compared = 0
    var = recurrence.var
    total_sum = Sum(index, num(0), Param(var), summand)
    for env in samples:
        for n in range(start, start + window):
            values = []
            for i in range(recurrence.order + 1):
                point = dict(env)
                point[var] = n + i
                values.append(safe_value(evaluator, total_sum, point))
            if any(v is None for v in values):
                continue
            try:
                residual = recurrence.residual(values, n, env, evaluator)
            except PisigmaError as e:
                logger.warning(f"Skipping recurrence check at {var}={n}: {e}")
                continue
            compared += 1
            if residual != 0:
                return n, compared
    return None, compared


def generate_recurrence(
    summand: Expr,
    index: str,
    var: str,
    params: Sequence[ParamBound] = (),
    d_max: Optional[int] = None,
    unknown: str = "A",
    verify: bool = True,
    atomic: Optional[bool] = None,
) -> Recurrence:
    """
    Recurrence in var for A(var) = sum_{index=0}^{var} summand.

    Args:
        summand: F(n, k), nested hypergeometric in k
        index: Summation index k
        var: Recurrence variable n
        params: Remaining parameters with their bounds
        d_max: Largest order tried (default from settings)
        unknown: Name of the unknown sequence
        verify: Check the certificate and the recurrence numerically
        atomic: Atomic reduction while building the summand tower

    Returns:
        The recurrence of least order with certificate

    Raises:
        NoRecurrenceError: no telescoper up to order d_max
        ValidationError: the summand does not depend on the summation index
    """
    settings = get_settings()
    d_max = settings.d_max if d_max is None else d_max
    if not depends_on(summand, index) and not depends_on(summand, var):
        raise ValidationError("degenerate summand: depends on neither the index nor the variable")
    names = tuple(p.name for p in params)
    ctx_k = get_context(index, (var,) + names)
    ctx_n = get_context(var, names)
    builder = TowerBuilder(ctx_k, atomic=atomic)
    shifted: List[Combination] = []
    found: Optional[Telescoper] = None
    for d in range(d_max + 1):
        shifted.append(builder.translate(shift_expr(summand, var, d)))
        found = creative_telescope(builder.tower, builder.spec, shifted)
        if found is not None:
            break
        logger.info(f"No telescoper of order {d}")
    if found is None:
        raise NoRecurrenceError(f"no recurrence of order <= {d_max} for the sum over {index}")
    tower, spec = builder.tower, builder.spec
    scale, c = _normalize(ctx_k, found.c)
    g = found.g.lift(tower).scale(scale)
    lower = found.lower
    order = len(c) - 1
    logger.info(f"Telescoper of order {order} found, valid from {index}={lower}")

    coefficients = tuple(transfer(value, ctx_n) for value in c)
    coefficient_exprs = [frac_to_expr(ctx_n, value) for value in coefficients]
    upper, steps = upper_boundary(tower, spec, g, summand, index, var, coefficient_exprs)
    parts = [upper]
    parts.append(neg(_constant_value_expr(ctx_k, ev_combination(tower, spec, g, lower))))
    for i, coeff in enumerate(coefficient_exprs):
        term = shift_expr(summand, var, i)
        for point in range(lower):
            parts.append(mul(coeff, substitute(term, {index: num(point)})))
        for j in range(1, i + 1):
            boundary = substitute(summand, {var: add(Param(var), i), index: add(Param(var), j)})
            parts.append(mul(coeff, boundary))
    rhs = add(*parts)
    # G(n+1) - G(n+1-steps) is a sum of certificate terms only for n+1-steps >= lower
    validity = max(lower - 1, 0, lower + steps - 2)
    rhs, validity = _simplify_rhs(ctx_n, rhs, validity, atomic)
    certificate = Certificate(
        index=index,
        summand=summand,
        coefficients=tuple(coefficient_exprs),
        antidifference=to_expression(tower, spec, g),
        lower=lower,
    )
    recurrence = Recurrence(unknown, var, tuple(params), coefficients, rhs, validity, certificate)
    if verify:
        recurrence = _verified(recurrence, summand, index, params)
    return recurrence


def upper_boundary(
    tower: Tower,
    spec: EvalSpec,
    g: Combination,
    summand: Expr,
    index: str,
    var: str,
    coefficients: Sequence[Expr],
    max_steps: Optional[int] = None,
) -> Tuple[Expr, int]:
    """
    G(n+1) for the certificate G of sum_i c_i F(n+i, k) = G(k+1) - G(k).

    When a coefficient of G has a pole at k = n+1 that cancels against a
    vanishing product, the value is taken s steps lower and the telescoping
    relation carries it back up:

        G(n+1) = G(n+1-s) + sum_{j=1}^{s} sum_i c_i F(n+i, n+1-j)

    Returns:
        (expression for G(n+1), s + 1); the second entry is 1 when no step
        back was needed

    Raises:
        PoleError: G has a pole at every point tried
    """
    ctx = tower.ctx
    n_elem = ctx.gen(var)
    max_steps = len(coefficients) + 2 if max_steps is None else max_steps
    last_error: Optional[PoleError] = None
    for steps in range(1, max_steps + 1):
        try:
            base = value_at(tower, spec, g, 2 - steps, n_elem, Param(var))
        except PoleError as e:
            logger.debug(f"Certificate has a pole {steps - 1} step(s) below the upper bound: {e}")
            last_error = e
            continue
        parts = [base]
        for j in range(2, steps + 1):
            point = add(Param(var), 2 - j)
            for i, coeff in enumerate(coefficients):
                parts.append(mul(coeff, substitute(summand, {var: add(Param(var), i), index: point})))
        if steps > 1:
            logger.info(f"Upper boundary of the certificate taken {steps - 1} step(s) lower")
        return add(*parts), steps
    raise last_error


def _simplify_rhs(ctx: AlgebraContext, rhs: Expr, validity: int, atomic: Optional[bool]) -> Tuple[Expr, int]:
    """Reduce the right-hand side in its own tower; the raw form is kept when it leaves the supported class"""
    builder = TowerBuilder(ctx, atomic=atomic)
    try:
        comb = builder.translate(rhs)
    except (UnsupportedError, ValidationError) as e:
        logger.info(f"Right-hand side kept unsimplified: {e}")
        return rhs, validity
    start = max(validity, comb.validity, beta(builder.tower, builder.spec, comb))
    return to_expression(builder.tower, builder.spec, comb), start


def _verified(recurrence: Recurrence, summand: Expr, index: str, params: Sequence[ParamBound]) -> Recurrence:
    settings = get_settings()
    samples = parameter_samples(params, 3)
    certificate = recurrence.certificate
    for env in samples:
        for n in CERTIFICATE_POINTS:
            if not certificate_holds(certificate, recurrence.var, env, n, settings.certificate_window):
                raise PisigmaError(f"certificate fails numerically at {recurrence.var}={n}")
    start = recurrence.validity
    for _ in range(recurrence.order + 3):
        window = settings.recurrence_check_window
        failure, compared = recurrence_holds(recurrence, summand, index, start, window, samples)
        if failure is None:
            if not compared:
                raise PisigmaError(f"recurrence could not be evaluated at any {recurrence.var} >= {start}")
            if start != recurrence.validity:
                logger.info(f"Recurrence validity raised to {start}")
                recurrence = replace(recurrence, validity=start)
            return recurrence
        if failure != start:
            break
        start += 1
    raise PisigmaError(f"recurrence fails numerically at {recurrence.var}={failure}")
