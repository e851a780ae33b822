"""
Evaluation and bounding functions.

ev maps ring elements to exact values in K at integer points: rational
coefficients are evaluated directly (0 at a pole), product generators by
their defining product, sum generators by their defining sum, and the sign
generator by (-1)^k. beta gives a start index past which ev is
multiplicative, additive and compatible with sigma.
"""

from typing import Dict, List, Union

from sympy.polys.fields import FracElement

from pisigma.algebra.polytools import nonnegative_integer_roots
from pisigma.errors import PoleError
from pisigma.evaluation.spec import EvalSpec, GenSpec
from pisigma.field.combination import Combination, OpaqueKey
from pisigma.field.ring import RingElem
from pisigma.field.tower import Generator, Tower


def _root_bound(poly) -> int:
    """1 + the largest nonnegative integer root, 0 without such roots"""
    if not poly or poly.is_ground:
        return 0
    roots = nonnegative_integer_roots(poly, 0)
    return max(roots) + 1 if roots else 0


def entry(tower: Tower, spec: EvalSpec, gen: Generator) -> GenSpec:
    """Explicit evaluation data of a generator, or its default"""
    found = spec.explicit(gen)
    if found is not None:
        return found
    default = spec.defaults.get(gen)
    if default is not None:
        return default
    ctx = tower.ctx
    if gen.is_pi:
        bound = max(_root_bound(gen.ratio.numer), _root_bound(gen.ratio.denom))
        default = GenSpec(lower=bound + 1 if bound else 1, const=ctx.one)
    else:
        summand = gen.summand
        default = GenSpec(lower=max(beta(summand.tower, spec, summand) + 1, 1), const=ctx.zero)
    spec.defaults[gen] = default
    return default


def generator_validity(tower: Tower, spec: EvalSpec, gen: Generator) -> int:
    """Index from which the generator's defining recurrence holds"""
    return entry(tower, spec, gen).lower - 1


def coefficient_bound(c: FracElement) -> int:
    """Smallest d such that c has no pole at an integer k >= d"""
    return _root_bound(c.denom)


def beta(tower: Tower, spec: EvalSpec, e: Union[RingElem, Combination]) -> int:
    """
    Bounding function.

    Args:
        tower: Tower of e (or an extension of it)
        spec: Evaluation data
        e: Ring element or combination

    Returns:
        Smallest index from which ev(e, .) respects ring operations and sigma
    """
    if isinstance(e, Combination):
        return max((beta(tower, spec, part) for part in e.parts.values()), default=0)
    result = 0
    for c in e.coefficients():
        result = max(result, coefficient_bound(c))
    for index in e.support():
        result = max(result, generator_validity(tower, spec, e.tower.gens[index]))
    return result


def _generator_values(tower: Tower, spec: EvalSpec, gen: Generator, k: int) -> FracElement:
    data = entry(tower, spec, gen)
    ctx = tower.ctx
    if k < data.lower - 1:
        return data.const
    cached: List[FracElement] = spec.values.get(gen)
    if cached is None:
        cached = [data.const]
        spec.values[gen] = cached
    while len(cached) <= k - data.lower + 1:
        i = data.lower + len(cached) - 1
        if gen.is_pi:
            cached.append(cached[-1] * ctx.at(gen.ratio, i - 1))
        else:
            summand = gen.summand
            cached.append(cached[-1] + ev(summand.tower, spec, summand, i - 1))
    return cached[k - data.lower + 1]


def ev_coefficient(tower: Tower, c: FracElement, k: int) -> FracElement:
    try:
        return tower.ctx.at(c, k)
    except PoleError:
        return tower.ctx.zero


def ev(tower: Tower, spec: EvalSpec, e: RingElem, k: int) -> FracElement:
    """
    Value of a ring element at k, exact in K.

    Raises:
        PoleError: a negative power of a product generator vanishes at k
    """
    ctx = tower.ctx
    tower = e.tower
    total = ctx.zero
    for (exps, s), c in e.terms.items():
        value = ev_coefficient(tower, c, k)
        if not value:
            continue
        for gen, exponent in zip(tower.gens, exps):
            if not exponent:
                continue
            base = _generator_values(tower, spec, gen, k)
            if exponent < 0 and not base:
                raise PoleError(f"{gen.name} vanishes at {k}")
            value = value * base ** exponent
        if s and k % 2:
            value = -value
        total = total + value
    return total


def ev_combination(tower: Tower, spec: EvalSpec, comb: Combination, k: int) -> Dict[OpaqueKey, FracElement]:
    """Values per opaque key"""
    result = {}
    for key, part in comb.parts.items():
        value = ev(tower, spec, part, k)
        if value:
            result[key] = value
    return result
