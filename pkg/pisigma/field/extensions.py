"""
Extension checks and product representation.

Supports:
- reduction of a product ratio a in K(x)* to a sign, an exponent vector
  over independent multiplicative coordinates and a shift quotient
- the product-extension check (is sigma(g) = a^r g solvable?)
- representation of hypergeometric products in a tower, reusing existing
  product generators and adjoining the sign generator when needed
- admissible adjunction of product and sum generators

Coordinates of a ratio are the primes of its numeric content, the
irreducible x-free polynomials of its parameter content, and the
shift-equivalence classes of its x-dependent irreducible factors. Two
ratios differ by a factor sigma(W)/W exactly when their vectors agree, so
the product check reduces to linear algebra over Q on exponent vectors.
"""

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement

from pisigma.algebra.context import qq_to_fraction
from pisigma.algebra.linalg import solve_linear
from pisigma.algebra.polytools import normalize_x_primitive
from pisigma.algebra.shiftclass import ShiftClassRegistry, shift_quotient_factor
from pisigma.config import get_settings
from pisigma.errors import UndecidedError, UnsupportedError, ValidationError
from pisigma.field.ring import RingElem
from pisigma.field.tower import Generator, GenKind, Tower, Vector
from pisigma.logging_config import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class RatioReduction:
    """Container for a = sign * canonical(vector) * sigma(quotient) / quotient"""
    classes: ShiftClassRegistry
    vector: Vector
    sign: int
    quotient: FracElement


@dataclass(frozen=True)
class PiRelation:
    """Container for sigma(g) = sign * a^power * g"""
    power: int
    element: RingElem
    sign: int


@dataclass(frozen=True)
class ProductRep:
    """Container for one represented product: sigma(element) = flag * ratio * element"""
    flag: int
    element: RingElem


def reduce_ratio(tower: Tower, a: FracElement) -> RatioReduction:
    """
    Reduce a nonzero ratio to its exponent vector.

    New shift classes are registered in the returned registry; the tower
    itself is not modified.
    """
    ctx = tower.ctx
    if not a:
        raise ValueError("product ratio must be nonzero")
    registry = tower.classes
    coords: Dict[Tuple, int] = defaultdict(int)
    constant = Fraction(1)
    quotient = ctx.one
    for poly, direction in ((a.numer, 1), (a.denom, -1)):
        coeff, factors = poly.factor_list()
        constant *= qq_to_fraction(coeff) ** direction
        for factor, mult in factors:
            exponent = mult * direction
            if ctx.x_degree(factor) <= 0:
                content, prim = factor.primitive()
                content = qq_to_fraction(content)
                if prim.LC < 0:
                    prim, content = -prim, -content
                if prim.is_ground:
                    constant *= (content * qq_to_fraction(prim.LC)) ** exponent
                    continue
                coords[("par", str(prim.as_expr()))] += exponent
                constant *= content ** exponent
                continue
            norm = normalize_x_primitive(ctx, factor)
            scale = factor.exquo(norm)
            constant *= qq_to_fraction(scale.LC) ** exponent
            registry, index, shift = registry.register(ctx, norm)
            coords[("cls", index)] += exponent
            if shift:
                quotient = quotient * shift_quotient_factor(ctx, registry.reps[index], shift) ** exponent
    sign = 1 if constant > 0 else -1
    constant = abs(constant)
    for prime, mult in factorint(constant.numerator).items():
        coords[("num", int(prime))] += mult
    for prime, mult in factorint(constant.denominator).items():
        coords[("num", int(prime))] -= mult
    vector = tuple(sorted((c, e) for c, e in coords.items() if e))
    return RatioReduction(classes=registry, vector=vector, sign=sign, quotient=quotient)


def _relation(tower: Tower, reduction: RatioReduction) -> Optional[PiRelation]:
    """sigma(g) = eps * a^r * g in the current tower, without sign correction"""
    ctx = tower.ctx
    pis = tower.pi_indices
    target = dict(reduction.vector)
    columns = [dict(tower.gens[i].vector) for i in pis]
    coords = sorted(set(target).union(*[set(c) for c in columns]))
    if not coords:
        return PiRelation(1, RingElem.const(tower, reduction.quotient), reduction.sign)
    if not pis:
        return None
    rows = [[QQ(col.get(c, 0)) for col in columns] for c in coords]
    rhs = [QQ(target.get(c, 0)) for c in coords]
    solution = solve_linear(rows, rhs, len(pis), QQ)
    if solution is None:
        return None
    coefficients = [qq_to_fraction(u) for u in solution]
    power = lcm(*[u.denominator for u in coefficients]) if coefficients else 1
    element = RingElem.const(tower, reduction.quotient ** power)
    sign = 1 if reduction.sign > 0 or power % 2 == 0 else -1
    for index, u in zip(pis, coefficients):
        e = int(u * power)
        if not e:
            continue
        gen = tower.gens[index]
        element = element * RingElem.gen(tower, index, e) * RingElem.const(tower, gen.quotient ** (-e))
        if gen.sign < 0 and e % 2:
            sign = -sign
    return PiRelation(power, element, sign)


def check_pi_extension(tower: Tower, a: FracElement, max_power: Optional[int] = None) -> Optional[PiRelation]:
    """
    Decide whether sigma(p) = a * p may be adjoined to the tower.

    Args:
        tower: Current tower
        a: Nonzero ratio in K(x)
        max_power: Largest power r accepted for a dependency

    Returns:
        None when the extension is admissible, otherwise a relation with
        sigma(element) = a^power * element (sign field 1)

    Raises:
        UndecidedError: a dependency needs a power above max_power
    """
    max_power = max_power or get_settings().pi_check_max_power
    reduction = reduce_ratio(tower, a)
    tower = tower.with_classes(reduction.classes)
    relation = _relation(tower, reduction)
    if relation is None:
        return None
    power, element = relation.power, relation.element
    if relation.sign < 0:
        if tower.has_sign:
            element = element * RingElem.sign(tower)
        else:
            power, element = 2 * power, element * element
    if power > max_power:
        raise UndecidedError(f"product ratio {a.as_expr()} is dependent only at power {power}")
    return PiRelation(power, element, 1)


def fresh_generator_name(tower: Tower, prefix: str) -> str:
    taken = set(tower.names) | set(tower.ctx.names)
    counter = 1
    while f"{prefix}{counter}" in taken:
        counter += 1
    return f"{prefix}{counter}"


def represent_products(
    tower: Tower, ratios: Sequence[FracElement], names: Optional[Sequence[str]] = None
) -> Tuple[Tower, List[ProductRep], List[int]]:
    """
    Represent hypergeometric products with the given shift ratios.

    For every ratio a_j the result holds a flag b_j in {1, -1} and a unit g_j
    with sigma(g_j) = b_j * a_j * g_j. Existing product generators are reused
    whenever a_j is a shift quotient times a product of their ratios; a new
    generator is adjoined otherwise. The sign generator is adjoined when a
    flag is -1.

    Returns:
        (extended tower, one ProductRep per ratio, indices of new generators)

    Raises:
        UnsupportedError: a ratio is only representable through a root
    """
    ctx = tower.ctx
    raw: List[Tuple[int, RingElem]] = []
    new_indices: List[int] = []
    for position, a in enumerate(ratios):
        reduction = reduce_ratio(tower, a)
        tower = tower.with_classes(reduction.classes)
        relation = _relation(tower, reduction)
        if relation is None:
            if ctx.is_constant(a):
                stored, stored_sign, flag = a * reduction.sign, 1, reduction.sign
            else:
                stored, stored_sign, flag = a, reduction.sign, 1
            name = names[position] if names else fresh_generator_name(tower, "p")
            gen = Generator(
                name=name,
                kind=GenKind.PI,
                ratio=stored,
                sign=stored_sign,
                vector=reduction.vector,
                quotient=reduction.quotient,
            )
            tower = tower.with_generator(gen)
            new_indices.append(tower.size - 1)
            logger.debug(f"Adjoined product generator {name} with ratio {stored.as_expr()}")
            raw.append((flag, RingElem.gen(tower, tower.size - 1)))
            continue
        if relation.power != 1:
            raise UnsupportedError(
                f"product with ratio {a.as_expr()} needs a root of order {relation.power}"
            )
        raw.append((relation.sign, relation.element))
    if any(flag < 0 for flag, _ in raw):
        tower = tower.with_sign()
    reps = [ProductRep(flag, element.lift(tower)) for flag, element in raw]
    return tower, reps, new_indices


def adjoin_pi(tower: Tower, ratio: FracElement, name: Optional[str] = None) -> Tower:
    """Adjoin sigma(p) = ratio * p after checking admissibility"""
    reduction = reduce_ratio(tower, ratio)
    tower = tower.with_classes(reduction.classes)
    if _relation(tower, reduction) is not None:
        raise ValidationError(f"product ratio {ratio.as_expr()} is dependent on the tower")
    gen = Generator(
        name=name or fresh_generator_name(tower, "p"),
        kind=GenKind.PI,
        ratio=ratio,
        sign=reduction.sign,
        vector=reduction.vector,
        quotient=reduction.quotient,
    )
    return tower.with_generator(gen)


def adjoin_sigma(tower: Tower, f: RingElem, name: Optional[str] = None, checked: bool = False) -> Tower:
    """
    Adjoin sigma(s) = s + f.

    Args:
        tower: Current tower (must extend f's tower)
        f: Shift summand
        name: Generator name; generated when omitted
        checked: Skip the telescoping check (the caller already ran it)

    Raises:
        ValidationError: f telescopes in the tower, so s would add a constant
    """
    f = f.lift(tower)
    if not checked:
        from pisigma.solvers.telescope import telescope

        if telescope(tower, f) is not None:
            raise ValidationError("shift summand telescopes; the sum extension would not be admissible")
    gen = Generator(name=name or fresh_generator_name(tower, "s"), kind=GenKind.SIGMA, summand=f)
    logger.debug(f"Adjoined sum generator {gen.name}")
    return tower.with_generator(gen)
