"""
First-order parameterized linear difference equations.

Given units a1, a0 and f_1..f_n in the ring R of a tower, solve_fplde
returns a basis of all (c, g) with c in K^n, g in R and

    a1 * sigma(g) + a0 * g = c_1 f_1 + ... + c_n f_n.

Supports:
- degree reduction over the sum generators, top generator first
- per product-and-sign monomial splitting at the base level, where sigma
  acts diagonally on the monomials
- universal denominators and degree bounds for the rational base case
- exact certificate checks on every returned vector
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from sympy.polys.fields import FracElement
from sympy.polys.rings import PolyElement

from pisigma.algebra.polytools import poly_lcm
from pisigma.errors import PisigmaError, UnsupportedError
from pisigma.field.ring import Key, RingElem, monomial_shift_factor, sigma_once
from pisigma.field.tower import Tower
from pisigma.logging_config import get_logger
from pisigma.solvers.polysol import constant_kernel, make_block, solve_blocks, universal_denominator

logger = get_logger(__name__)

Basis = List[Tuple[List[FracElement], RingElem]]


@dataclass(frozen=True)
class FpldeSolution:
    """Container for one basis vector (c_1..c_n, g)"""
    c: Tuple[FracElement, ...]
    g: RingElem


def denominator_bound(tower: Tower, u1: FracElement, u0: FracElement, rhs: Sequence[FracElement], key: Key) -> Tuple[PolyElement, Tuple[PolyElement, PolyElement, List[PolyElement]]]:
    """
    Universal denominator of the rational equation at one monomial.

    For a monomial M with sigma(M) = w * M the coefficient y of M in a
    solution satisfies u1 * w * sigma(y) + u0 * y = sum c_i r_i. Above the
    base field the solver searches polynomials in the sum generators, so the
    bound there is 1; at the base it is Abramov's denominator of the cleared
    equation.

    Returns:
        (U, (P1, P0, [R_i])) where P1, P0, R_i are the cleared polynomials
    """
    ctx = tower.ctx
    p1 = u1 * monomial_shift_factor(tower, key)
    p0 = u0
    common = poly_lcm(ctx, p1.denom, p0.denom)
    for r in rhs:
        if r:
            common = poly_lcm(ctx, common, r.denom)

    def clear(value: FracElement) -> PolyElement:
        if not value:
            return ctx.ring.zero
        return value.numer * common.exquo(value.denom)

    cleared = (clear(p1), clear(p0), [clear(r) for r in rhs])
    return universal_denominator(ctx, cleared[0], cleared[1], 1), cleared


def sum_degree_bound(rhs: Sequence[RingElem], index: int) -> int:
    """Bound for the degree of a solution in the sum generator at index: one above the right-hand sides"""
    return max((r.degree(index) for r in rhs), default=-1) + 1


class FpldeSolver:
    """Solver for one pair of coefficients u1, u0 in K(x)* over a fixed tower"""

    def __init__(self, tower: Tower, u1: FracElement, u0: FracElement):
        self.tower = tower
        self.ctx = tower.ctx
        self.u1 = u1
        self.u0 = u0
        self.levels = tower.sigma_indices
        self._homogeneous: Dict[int, List[RingElem]] = {}

    def apply(self, g: RingElem) -> RingElem:
        return sigma_once(g).scale(self.u1) + g.scale(self.u0)

    def solve(self, rhs: Sequence[RingElem]) -> Basis:
        rhs = [r.lift(self.tower) for r in rhs]
        return self._solve(len(self.levels) - 1, rhs)

    def _unit_vectors(self, n: int) -> List[List[FracElement]]:
        return [[self.ctx.one if i == j else self.ctx.zero for j in range(n)] for i in range(n)]

    def _solve(self, level: int, rhs: List[RingElem]) -> Basis:
        n = len(rhs)
        if n and not any(rhs):
            zero = [self.ctx.zero] * n
            basis = [(e, RingElem.zero(self.tower)) for e in self._unit_vectors(n)]
            return basis + [(list(zero), g) for g in self.homogeneous(level)]
        if level < 0:
            return self._base(rhs)
        bound = sum_degree_bound(rhs, self.levels[level])
        return self._solve_poly(level, rhs, bound)

    def homogeneous(self, level: int) -> List[RingElem]:
        """Basis of the homogeneous solutions using the sum generators up to level"""
        if level not in self._homogeneous:
            self._homogeneous[level] = [g for _, g in self._solve(level, [])]
        return self._homogeneous[level]

    def _solve_poly(self, level: int, rhs: List[RingElem], bound: int) -> Basis:
        n = len(rhs)
        if bound < 0:
            return [(c, RingElem.zero(self.tower)) for c in constant_kernel(rhs)]
        index = self.levels[level]
        top = [r.coeff(index, bound) for r in rhs]
        top_basis = self._solve(level - 1, top)
        power = RingElem.gen(self.tower, index, bound)
        reduced = []
        for c, w in top_basis:
            term = w * power
            f = self.apply(term)
            combined = RingElem.zero(self.tower)
            for ci, r in zip(c, rhs):
                if ci:
                    combined = combined + r.scale(ci)
            reduced.append(combined - f)
        lower = self._solve_poly(level, reduced, bound - 1)
        result: Basis = []
        for d, g_low in lower:
            c = [self.ctx.zero] * n
            g = g_low
            for dk, (ck, wk) in zip(d, top_basis):
                if not dk:
                    continue
                c = [a + dk * b for a, b in zip(c, ck)]
                g = g + (wk * power).scale(dk)
            result.append((c, g))
        return result

    def _base(self, rhs: List[RingElem]) -> Basis:
        """Rational case: one polynomial block per product-and-sign monomial"""
        ctx = self.ctx
        tower = self.tower
        zero_key = ((0,) * tower.size, 0)
        keys = sorted({zero_key} | {key for r in rhs for key in r.terms})
        blocks = []
        denominators = []
        for key in keys:
            values = [r.terms.get(key, ctx.zero) for r in rhs]
            u, (p1, p0, cleared) = denominator_bound(tower, self.u1, self.u0, values, key)
            shifted = ctx.shift_poly(u, 1)
            common = poly_lcm(ctx, shifted, u)
            q1 = p1 * common.exquo(shifted)
            q0 = p0 * common.exquo(u)
            blocks.append(make_block(ctx, [q0, q1], [r * common for r in cleared]))
            denominators.append(ctx.frac(u))
        result: Basis = []
        for c, zs in solve_blocks(ctx, blocks, len(rhs)):
            g = RingElem.zero(tower)
            for key, z, u in zip(keys, zs, denominators):
                if z:
                    g = g + RingElem.monomial(tower, key, z / u)
            result.append((c, g))
        return result


def solve_fplde(tower: Tower, alpha1: RingElem, alpha0: RingElem, rhs: Sequence[RingElem]) -> List[FpldeSolution]:
    """
    Basis of the solution space of alpha1 * sigma(g) + alpha0 * g = sum c_i rhs_i.

    Args:
        tower: Tower containing all inputs
        alpha1: Unit of the form u1 * M
        alpha0: Unit of the form u0 * M with the same monomial M
        rhs: Right-hand sides f_1..f_n

    Returns:
        Linearly independent solution vectors

    Raises:
        UnsupportedError: the coefficients carry different monomials
    """
    alpha1 = alpha1.lift(tower)
    alpha0 = alpha0.lift(tower)
    if not (alpha1.is_unit() and alpha0.is_unit()):
        raise UnsupportedError("equation coefficients must be units")
    ((key1, u1),) = alpha1.terms.items()
    ((key0, u0),) = alpha0.terms.items()
    if key1 != key0:
        raise UnsupportedError("equation coefficients with different monomials")
    monomial = RingElem.monomial(tower, key1)
    inverse = monomial.inverse()
    lifted = [r.lift(tower) for r in rhs]
    solver = FpldeSolver(tower, u1, u0)
    basis = solver.solve([r * inverse for r in lifted])
    logger.debug(f"First-order equation with {len(lifted)} right-hand sides has {len(basis)} solutions")
    result = []
    for c, g in basis:
        lhs = (sigma_once(g) * alpha1) + (g * alpha0)
        expected = RingElem.zero(tower)
        for ci, r in zip(c, lifted):
            if ci:
                expected = expected + r.scale(ci)
        if lhs != expected:
            raise PisigmaError("first-order solution failed its certificate check")
        result.append(FpldeSolution(tuple(c), g))
    return result
