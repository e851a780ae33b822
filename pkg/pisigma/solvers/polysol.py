"""
Rational and polynomial solutions of linear difference equations over K(x).

Supports:
- Abramov's universal denominator for sum_i q_i(x) y(x+i) = r(x)
- the degree bound from the indicial polynomial of the difference expansion
- joint polynomial systems sharing the parameter vector c (one block per
  product monomial in the first-order solver)
- constant linear dependencies among rational functions and ring elements
"""

from dataclasses import dataclass
from math import comb
from typing import List, Sequence, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from pisigma.algebra.context import AlgebraContext
from pisigma.algebra.linalg import constant_domain, nullspace
from pisigma.algebra.polytools import dispersion_set, gcd_unipoly, nonnegative_integer_roots, poly_lcm, x_leading
from pisigma.field.ring import RingElem
from pisigma.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class PolyBlock:
    """
    Container for one polynomial equation sum_i coeffs[i](x) z(x+i) = sum_j c_j rhs[j](x).

    The parameter vector c is shared by all blocks of a joint system; z is
    searched with degree at most `degree` (no unknowns when negative).
    """
    coeffs: Tuple[PolyElement, ...]
    rhs: Tuple[PolyElement, ...]
    degree: int


def universal_denominator(ctx: AlgebraContext, lead: PolyElement, trail: PolyElement, order: int = 1) -> PolyElement:
    """
    A multiple of the denominator of every rational solution.

    Args:
        ctx: Algebra context
        lead: Leading coefficient q_order (polynomial)
        trail: Trailing coefficient q_0 (polynomial)
        order: Order of the equation

    Returns:
        U such that every rational solution y of an equation with these
        coefficients and polynomial right-hand side has y * U polynomial
    """
    a = ctx.shift_poly(lead, -order)
    b = trail
    result = ctx.ring.one
    for h in sorted(dispersion_set(ctx, a, b), reverse=True):
        d = gcd_unipoly(ctx, a, ctx.shift_poly(b, h))
        if ctx.x_degree(d) <= 0:
            continue
        a = a.exquo(d)
        b = b.exquo(ctx.shift_poly(d, -h))
        for i in range(h + 1):
            result = result * ctx.shift_poly(d, -i)
    return result


def _falling(ctx: AlgebraContext, j: int) -> PolyElement:
    x = ctx.x
    result = ctx.ring.one
    for i in range(j):
        result = result * (x - i)
    return result


def degree_bound(ctx: AlgebraContext, coeffs: Sequence[PolyElement], rhs_degree: int) -> int:
    """
    Upper bound for the degree of polynomial solutions.

    With E = 1 + Delta the operator is sum_j t_j Delta^j, t_j = sum_i C(i, j) q_i.
    A solution of degree d maps to degree d + b, b = max(deg t_j - j), unless d
    is a root of the indicial polynomial sum lc(t_j) * falling(d, j) over the
    j attaining b.

    Returns:
        The bound, -1 when only the zero polynomial can solve the equation
    """
    order = len(coeffs) - 1
    t = []
    for j in range(order + 1):
        tj = ctx.ring.zero
        for i in range(j, order + 1):
            tj = tj + coeffs[i] * comb(i, j)
        t.append(tj)
    b = max(ctx.x_degree(tj) - j for j, tj in enumerate(t) if tj)
    indicial = ctx.ring.zero
    for j, tj in enumerate(t):
        if tj and ctx.x_degree(tj) - j == b:
            indicial = indicial + x_leading(ctx, tj) * _falling(ctx, j)
    roots = nonnegative_integer_roots(indicial, 0) if ctx.x_degree(indicial) > 0 else set()
    bound = rhs_degree - b if rhs_degree >= 0 else -1
    return max([bound] + list(roots))


def _image(ctx: AlgebraContext, coeffs: Sequence[PolyElement], d: int) -> PolyElement:
    """The operator applied to x^d"""
    monomial = ctx.x ** d
    result = ctx.ring.zero
    for i, q in enumerate(coeffs):
        if q:
            result = result + q * ctx.shift_poly(monomial, i)
    return result


def make_block(ctx: AlgebraContext, coeffs: Sequence[PolyElement], rhs: Sequence[PolyElement]) -> PolyBlock:
    rhs_degree = max((ctx.x_degree(r) for r in rhs), default=-1)
    return PolyBlock(tuple(coeffs), tuple(rhs), degree_bound(ctx, coeffs, rhs_degree))


def solve_blocks(
    ctx: AlgebraContext, blocks: Sequence[PolyBlock], nparams: int
) -> List[Tuple[List[FracElement], List[FracElement]]]:
    """
    Basis of the joint solution space of polynomial blocks.

    Returns:
        One (c vector, [z per block]) pair per basis vector; z is a
        polynomial in x over K, returned as a field element
    """
    domain = constant_domain(ctx)
    offsets = []
    ncols = nparams
    for block in blocks:
        offsets.append(ncols)
        ncols += max(block.degree + 1, 0)
    if ncols == 0:
        return []
    x = ctx.gen(ctx.var)
    rows = []
    for block, offset in zip(blocks, offsets):
        images = [_image(ctx, block.coeffs, d) for d in range(block.degree + 1)]
        top = max([ctx.x_degree(p) for p in images] + [ctx.x_degree(r) for r in block.rhs] + [-1])
        for t in range(top + 1):
            row = [ctx.zero] * ncols
            nonzero = False
            for j, r in enumerate(block.rhs):
                value = r.coeff_wrt(0, t)
                if value:
                    row[j] = -ctx.field.new(value)
                    nonzero = True
            for d, p in enumerate(images):
                value = p.coeff_wrt(0, t)
                if value:
                    row[offset + d] = ctx.field.new(value)
                    nonzero = True
            if nonzero:
                rows.append(row)
    logger.debug(f"Polynomial system with {len(rows)} equations and {ncols} unknowns")
    result = []
    for vector in nullspace(rows, ncols, domain):
        c = list(vector[:nparams])
        zs = []
        for block, offset in zip(blocks, offsets):
            z = ctx.zero
            for d in range(block.degree + 1):
                value = vector[offset + d]
                if value:
                    z = z + value * x ** d
            zs.append(z)
        result.append((c, zs))
    return result


def polynomial_solutions(
    ctx: AlgebraContext, coeffs: Sequence[PolyElement], rhs: Sequence[PolyElement]
) -> List[Tuple[List[FracElement], FracElement]]:
    """
    Polynomial solutions over K of sum_i coeffs[i] y(x+i) = sum_j c_j rhs[j].

    Args:
        ctx: Algebra context
        coeffs: q_0..q_m as polynomials (not all zero)
        rhs: r_1..r_n as polynomials (may be empty)

    Returns:
        Basis of pairs (c vector, y)
    """
    block = make_block(ctx, coeffs, rhs)
    return [(c, zs[0]) for c, zs in solve_blocks(ctx, [block], len(rhs))]


def rational_kernel(ctx: AlgebraContext, columns: Sequence[Sequence[FracElement]]) -> List[List[FracElement]]:
    """
    Constant linear dependencies among vectors over K(x).

    Args:
        columns: One vector (list of rational functions, common length) per unknown

    Returns:
        Basis of {c in K^n : sum_j c_j * columns[j] = 0}
    """
    n = len(columns)
    if n == 0:
        return []
    length = len(columns[0])
    rows = []
    for position in range(length):
        entries = [col[position] for col in columns]
        denom = ctx.ring.one
        for e in entries:
            if e:
                denom = poly_lcm(ctx, denom, e.denom)
        scaled = [(e.numer * denom.exquo(e.denom)) if e else ctx.ring.zero for e in entries]
        top = max(ctx.x_degree(p) for p in scaled)
        for t in range(top + 1):
            row = [ctx.field.new(p.coeff_wrt(0, t)) if p else ctx.zero for p in scaled]
            if any(row):
                rows.append(row)
    return nullspace(rows, n, constant_domain(ctx))


def constant_kernel(elements: Sequence[RingElem]) -> List[List[FracElement]]:
    """Basis of {c in K^n : sum_j c_j * elements[j] = 0} for ring elements of one tower"""
    if not elements:
        return []
    tower = elements[0].tower
    ctx = tower.ctx
    keys = sorted({key for e in elements for key in e.terms})
    columns = [[e.terms.get(key, ctx.zero) for key in keys] for e in elements]
    if not keys:
        return nullspace([], len(elements), constant_domain(ctx))
    return rational_kernel(ctx, columns)
