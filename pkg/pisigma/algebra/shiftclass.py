"""
Shift-equivalence classes of irreducible polynomials.

Two x-dependent irreducible polynomials q1, q2 are shift equivalent when
q2(x) = c * q1(x + j) for an integer j. The registry keeps one canonical
representative per class, in order of first appearance.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from sympy.polys.rings import PolyElement

from pisigma.algebra.context import AlgebraContext
from pisigma.algebra.polytools import normalize_x_primitive


def shift_distance(ctx: AlgebraContext, base: PolyElement, other: PolyElement) -> Optional[int]:
    """
    The integer j with other = base(x + j), or None.

    Both arguments must be normalized (normalize_x_primitive).
    """
    d = ctx.x_degree(base)
    if d <= 0 or d != ctx.x_degree(other):
        return None
    lc_base = base.coeff_wrt(0, d)
    if lc_base != other.coeff_wrt(0, d):
        return None
    delta = other.coeff_wrt(0, d - 1) - base.coeff_wrt(0, d - 1)
    j_frac = ctx.frac(delta, lc_base * d)
    if not ctx.is_rational_number(j_frac):
        return None
    j = ctx.to_fraction(j_frac)
    if j.denominator != 1:
        return None
    j = int(j)
    if ctx.shift_poly(base, j) != other:
        return None
    return j


def shift_class(ctx: AlgebraContext, q: PolyElement, reps: Tuple[PolyElement, ...]) -> Optional[Tuple[int, int]]:
    """Index of the representative of q's class and the shift j with q = rep(x + j)"""
    q = normalize_x_primitive(ctx, q)
    for index, rep in enumerate(reps):
        j = shift_distance(ctx, rep, q)
        if j is not None:
            return index, j
    return None


@dataclass(frozen=True)
class ShiftClassRegistry:
    """Container for the canonical representatives of one tower"""
    reps: Tuple[PolyElement, ...] = ()

    def locate(self, ctx: AlgebraContext, q: PolyElement) -> Optional[Tuple[int, int]]:
        return shift_class(ctx, q, self.reps)

    def register(self, ctx: AlgebraContext, q: PolyElement) -> Tuple["ShiftClassRegistry", int, int]:
        """
        Locate q, adding it as a new representative when its class is new.

        Returns:
            (registry, representative index, shift j)
        """
        found = self.locate(ctx, q)
        if found is not None:
            return self, found[0], found[1]
        rep = normalize_x_primitive(ctx, q)
        return ShiftClassRegistry(self.reps + (rep,)), len(self.reps), 0


def shift_quotient_factor(ctx: AlgebraContext, rep: PolyElement, j: int):
    """
    H_j with rep(x + j) = rep(x) * sigma(H_j) / H_j.

    For j > 0, H_j = prod_{i<j} rep(x + i); for j < 0, H_j = 1 / prod_{i=1}^{|j|} rep(x - i).
    """
    result = ctx.one
    if j > 0:
        for i in range(j):
            result = result * ctx.frac(ctx.shift_poly(rep, i))
    elif j < 0:
        for i in range(1, -j + 1):
            result = result / ctx.frac(ctx.shift_poly(rep, -i))
    return result
