"""
Polynomial utilities over Q[x, params].

Supports:
- gcd normalized in K[x] (parameter content removed)
- integer roots that hold identically in the parameters
- dispersion sets via resultants
- integer-linear factor extraction for recurrence coefficients
- x-coefficient access and partial content handling
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Set, Tuple

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyRing, PolyElement

from pisigma.algebra.context import AlgebraContext, qq_to_fraction
from pisigma.logging_config import get_logger

logger = get_logger(__name__)


@lru_cache(maxsize=8)
def _univariate_ring(name: str = "_u") -> PolyRing:
    return PolyRing((name,), QQ)


def x_coefficients(ctx: AlgebraContext, p: PolyElement) -> List[PolyElement]:
    """Coefficients of p in x as x-free polynomials, index = degree"""
    return [p.coeff_wrt(0, d) for d in range(ctx.x_degree(p) + 1)]


def x_leading(ctx: AlgebraContext, p: PolyElement) -> PolyElement:
    return p.coeff_wrt(0, ctx.x_degree(p))


def x_content(ctx: AlgebraContext, p: PolyElement) -> PolyElement:
    """gcd of the x-coefficients (an x-free polynomial)"""
    content = ctx.ring.zero
    for c in x_coefficients(ctx, p):
        if c:
            content = c if not content else content.gcd(c)
    return content


def normalize_x_primitive(ctx: AlgebraContext, p: PolyElement) -> PolyElement:
    """
    Divide out the parameter content and normalize sign and numeric content.

    The result is the canonical associate of p in K[x]: integer coefficients,
    no x-free factor, positive leading coefficient.
    """
    if not p:
        return p
    if ctx.x_degree(p) <= 0:
        return ctx.ring.one
    content = x_content(ctx, p)
    q = p.exquo(content)
    _, q = q.clear_denoms()
    q = q.primitive()[1]
    if q.LC < 0:
        q = -q
    return q


def gcd_unipoly(ctx: AlgebraContext, p: PolyElement, q: PolyElement) -> PolyElement:
    """
    Greatest common divisor in K[x], normalized by normalize_x_primitive.

    Args:
        ctx: Algebra context
        p: First polynomial
        q: Second polynomial

    Returns:
        The normalized gcd (1 when coprime in K[x])
    """
    if not p and not q:
        return ctx.ring.zero
    if not q:
        return normalize_x_primitive(ctx, p)
    if not p:
        return normalize_x_primitive(ctx, q)
    return normalize_x_primitive(ctx, p.gcd(q))


def _group_by_other_monomials(p: PolyElement, index: int) -> List[PolyElement]:
    """Split p into univariate polynomials in generator `index`, one per monomial of the others"""
    uni = _univariate_ring()
    u = uni.gens[0]
    groups: Dict[Tuple[int, ...], PolyElement] = {}
    for monom, coeff in p.iterterms():
        key = monom[:index] + monom[index + 1:]
        groups[key] = groups.get(key, uni.zero) + uni(coeff) * u ** monom[index]
    return list(groups.values())


def integer_roots(p: PolyElement, index: int = 0) -> Set[int]:
    """
    All integers r with p = 0 identically after substituting generator `index` = r.

    Args:
        p: Nonzero polynomial
        index: Generator index of the variable (0 is x)

    Returns:
        Set of unconditional integer roots
    """
    if not p:
        raise ValueError("integer_roots of the zero polynomial")
    common = None
    for part in _group_by_other_monomials(p, index):
        common = part if common is None else common.gcd(part)
        if common.degree() <= 0:
            return set()
    roots: Set[int] = set()
    _, factors = common.factor_list()
    for factor, _mult in factors:
        if factor.degree() != 1:
            continue
        a = qq_to_fraction(factor.coeff_wrt(0, 1).LC)
        b_poly = factor.coeff_wrt(0, 0)
        b = qq_to_fraction(b_poly.LC) if b_poly else Fraction(0)
        root = -b / a
        if root.denominator == 1:
            roots.add(int(root))
    return roots


def nonnegative_integer_roots(p: PolyElement, index: int = 0) -> Set[int]:
    return {r for r in integer_roots(p, index) if r >= 0}


_SHIFT_SYMBOL = Symbol("_disp_h")


@lru_cache(maxsize=64)
def _dispersion_ring(ring: PolyRing) -> PolyRing:
    symbols = (ring.symbols[0], _SHIFT_SYMBOL) + tuple(ring.symbols[1:])
    return PolyRing(symbols, ring.domain)


def dispersion_set(ctx: AlgebraContext, p: PolyElement, q: PolyElement) -> Set[int]:
    """
    All j >= 0 with deg_x gcd(p(x), q(x + j)) > 0.

    Candidates are the integer roots in j of Res_x(p(x), q(x + j)); each
    candidate is confirmed by a direct gcd.
    """
    if not p or not q:
        raise ValueError("dispersion_set needs nonzero polynomials")
    if ctx.x_degree(p) <= 0 or ctx.x_degree(q) <= 0:
        return set()
    ring2 = _dispersion_ring(ctx.ring)
    x2, h2 = ring2.gens[0], ring2.gens[1]
    p2 = p.set_ring(ring2)
    q2 = q.set_ring(ring2).compose(x2, x2 + h2)
    # Res_x lives in the ring without x
    res = p2.resultant(q2)
    if not res:
        # common factor for every shift; only possible for x-free cases handled above
        logger.debug("dispersion resultant vanished identically")
        return set()
    if not isinstance(res, PolyElement) or res.is_ground:
        return set()
    h_index = res.ring.symbols.index(_SHIFT_SYMBOL)
    result = set()
    for j in nonnegative_integer_roots(res, h_index):
        if ctx.x_degree(p.gcd(ctx.shift_poly(q, j))) > 0:
            result.add(j)
    return result


def factor_integer_linear(ctx: AlgebraContext, p: PolyElement) -> Tuple[List[Tuple[Fraction, int]], PolyElement]:
    """
    Peel off the linear factors of p in x that have rational roots.

    Returns:
        (list of (root, multiplicity) sorted by root descending, remainder)
    """
    if not p:
        return [], p
    coeff, factors = p.factor_list()
    roots: List[Tuple[Fraction, int]] = []
    remainder = ctx.ring(coeff)
    for factor, mult in factors:
        if ctx.x_degree(factor) == 1 and factor.coeff_wrt(0, 1).is_ground and factor.coeff_wrt(0, 0).is_ground:
            a_poly = factor.coeff_wrt(0, 1)
            b_poly = factor.coeff_wrt(0, 0)
            a = qq_to_fraction(a_poly.LC)
            b = qq_to_fraction(b_poly.LC) if b_poly else Fraction(0)
            roots.append((-b / a, mult))
            remainder = remainder * ctx.poly(a) ** mult
        else:
            remainder = remainder * factor ** mult
    roots.sort(key=lambda item: item[0], reverse=True)
    return roots, remainder


def factored(ctx: AlgebraContext, p: PolyElement) -> Tuple[Fraction, List[Tuple[PolyElement, int]]]:
    """Numeric content and irreducible factors with multiplicities"""
    coeff, factors = p.factor_list()
    return qq_to_fraction(coeff), sorted(factors, key=lambda item: (ctx.x_degree(item[0]), str(item[0])))


def poly_lcm(ctx: AlgebraContext, p: PolyElement, q: PolyElement) -> PolyElement:
    if not p:
        return q
    if not q:
        return p
    g = p.gcd(q)
    return (p * q).exquo(g)
