"""
Hypergeometric solutions of linear recurrences with polynomial coefficients.

For sum_i c_i(x) y(x+i) = 0 every hypergeometric solution has a shift
ratio rho = z * A(x)/B(x) * C(x+1)/C(x) with A dividing c_0, B dividing
c_d(x-d+1), z a root of the leading-term polynomial and C a polynomial
solution of the reduced equation. Candidates are enumerated over all
divisor pairs; every ratio found is verified by substitution.
"""

from itertools import product
from typing import List, Sequence

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from pisigma.algebra.context import AlgebraContext
from pisigma.errors import UnsupportedError
from pisigma.field.extensions import reduce_ratio
from pisigma.field.tower import base_tower
from pisigma.logging_config import get_logger
from pisigma.solvers.polysol import polynomial_solutions

logger = get_logger(__name__)


def _divisors(ctx: AlgebraContext, p: PolyElement) -> List[PolyElement]:
    """Monic-up-to-content divisors of p built from its x-dependent irreducible factors"""
    _, factors = p.factor_list()
    factors = sorted(
        [(f, m) for f, m in factors if ctx.x_degree(f) > 0], key=lambda item: (ctx.x_degree(item[0]), str(item[0]))
    )
    result = []
    for exps in product(*[range(m, -1, -1) for _, m in factors]):
        d = ctx.ring.one
        for (f, _), e in zip(factors, exps):
            if e:
                d = d * f ** e
        result.append(d)
    return result


def _shifted_product(ctx: AlgebraContext, p: PolyElement, start: int, stop: int) -> PolyElement:
    result = ctx.ring.one
    for j in range(start, stop):
        result = result * ctx.shift_poly(p, j)
    return result


def _leading_roots(ctx: AlgebraContext, polys: Sequence[PolyElement]) -> List[FracElement]:
    """Nonzero roots in K of sum over the top-degree polys of lc(P_i) * z^i"""
    top = max(ctx.x_degree(p) for p in polys)
    z = ctx.x
    equation = ctx.ring.zero
    for i, p in enumerate(polys):
        if p and ctx.x_degree(p) == top:
            equation = equation + p.coeff_wrt(0, top) * z ** i
    if ctx.x_degree(equation) <= 0:
        return []
    _, factors = equation.factor_list()
    roots = []
    for f, _ in factors:
        if ctx.x_degree(f) != 1:
            continue
        a, b = f.coeff_wrt(0, 1), f.coeff_wrt(0, 0)
        if b:
            roots.append(ctx.frac(-b, a))
    return sorted(roots, key=lambda r: str(r.as_expr()))


def annihilates(ctx: AlgebraContext, coeffs: Sequence[PolyElement], ratio: FracElement) -> bool:
    """True when the hypergeometric term with this ratio solves the homogeneous recurrence"""
    total = ctx.zero
    running = ctx.one
    for i, c in enumerate(coeffs):
        if i:
            running = running * ctx.shift(ratio, i - 1)
        total = total + ctx.frac(c) * running
    return not total


def equivalent_ratios(ctx: AlgebraContext, r1: FracElement, r2: FracElement) -> bool:
    """True when the terms differ by a rational factor (r1 / r2 = sigma(W) / W)"""
    reduction = reduce_ratio(base_tower(ctx), r1 / r2)
    return not reduction.vector and reduction.sign > 0


def hyper_ratios(ctx: AlgebraContext, coeffs: Sequence[PolyElement], first: bool = False) -> List[FracElement]:
    """
    Shift ratios of the hypergeometric solutions, one per equivalence class.

    Args:
        ctx: Context whose variable is the recurrence index
        coeffs: c_0..c_d as polynomials, c_0 and c_d nonzero
        first: Stop after the first ratio found

    Raises:
        UnsupportedError: the trailing or leading coefficient vanishes
    """
    d = len(coeffs) - 1
    if d < 1 or not coeffs[0] or not coeffs[-1]:
        raise UnsupportedError("recurrence needs nonzero leading and trailing coefficients")
    found: List[FracElement] = []
    a_candidates = _divisors(ctx, coeffs[0])
    b_candidates = _divisors(ctx, ctx.shift_poly(coeffs[-1], 1 - d))
    logger.debug(f"Hyper: {len(a_candidates)} x {len(b_candidates)} divisor pairs")
    for a, b in product(a_candidates, b_candidates):
        if ctx.x_degree(a.gcd(b)) > 0:
            continue
        polys = [c * _shifted_product(ctx, a, 0, i) * _shifted_product(ctx, b, i, d) for i, c in enumerate(coeffs)]
        for z in _leading_roots(ctx, polys):
            zn, zd = z.numer, z.denom
            scaled = [zn ** i * zd ** (d - i) * p for i, p in enumerate(polys)]
            solutions = polynomial_solutions(ctx, scaled, [])
            if not solutions:
                continue
            c_poly = solutions[0][1]
            ratio = z * ctx.frac(a, b) * ctx.shift(c_poly, 1) / c_poly
            if not annihilates(ctx, coeffs, ratio):
                continue
            if any(equivalent_ratios(ctx, ratio, other) for other in found):
                continue
            logger.debug(f"Hyper: ratio {ratio.as_expr()}")
            found.append(ratio)
            if first:
                return found
    return found
