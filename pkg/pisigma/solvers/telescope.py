"""
Telescoping, atomic reduction and indefinite summation in a tower.

Supports:
- telescope: g with sigma(g) - g = f, or None
- the sum-extension check (f must not telescope)
- reduce_summand: telescoping up to candidate atoms (polynomial multiples
  of monomials and shift-canonical partial fractions), preferring atoms of
  low degree
- indefinite_sum: telescope, otherwise adjoin atoms one at a time until the
  summand telescopes in the extended tower
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from sympy.polys.fields import FracElement

from pisigma.algebra.linalg import constant_domain, rref_with_transform
from pisigma.algebra.polytools import normalize_x_primitive
from pisigma.algebra.shiftclass import ShiftClassRegistry
from pisigma.config import get_settings
from pisigma.evaluation.ev import beta
from pisigma.evaluation.spec import EvalSpec, GenSpec
from pisigma.expr.nodes import Expr, Param, Sum, Var, num
from pisigma.expr.transform import all_names, fresh_name, substitute
from pisigma.field.combination import Combination
from pisigma.field.extensions import adjoin_sigma
from pisigma.field.ring import Key, RingElem, sigma_apply
from pisigma.field.tower import Tower
from pisigma.logging_config import get_logger
from pisigma.solvers.fplde import solve_fplde

logger = get_logger(__name__)


@dataclass(frozen=True)
class SummandReduction:
    """
    Container for sigma(g) - g = f - sum_j coefficients[j] * atoms[j].

    atoms[0] is the atom to adjoin next; the others follow in order of preference.
    """
    g: RingElem
    atoms: Tuple[RingElem, ...]
    coefficients: Tuple[FracElement, ...]


@dataclass(frozen=True)
class IndefiniteSum:
    """Container for an indefinite sum: sigma(g) - g = f in the (extended) tower"""
    tower: Tower
    spec: EvalSpec
    g: RingElem
    adjoined: int


def _drop_constant(g: RingElem) -> RingElem:
    """Remove the K-component of the rational part"""
    ctx = g.ctx
    key = g.zero_key
    c = g.terms.get(key)
    if c is None or not ctx.is_constant(c.denom):
        return g
    constant = ctx.frac(c.numer.coeff_wrt(0, 0), c.denom)
    if not constant:
        return g
    return g - RingElem.const(g.tower, constant)


def _telescope_ring(tower: Tower, f: RingElem) -> Optional[RingElem]:
    one = RingElem.one(tower)
    for solution in solve_fplde(tower, one, -one, [f]):
        c0 = solution.c[0]
        if c0:
            return _drop_constant(solution.g.scale(1 / c0))
    return None


def telescope(tower: Tower, f: Union[RingElem, Combination]) -> Optional[Union[RingElem, Combination]]:
    """
    Solve sigma(g) - g = f.

    Args:
        tower: Tower containing f
        f: Ring element, or a combination (solved per opaque key)

    Returns:
        g with zero K-component, or None when f does not telescope
    """
    if isinstance(f, Combination):
        parts = {}
        for key, part in f:
            g = _telescope_ring(tower, part.lift(tower))
            if g is None:
                return None
            parts[key] = g
        return Combination(tower, parts, f.validity)
    if not f:
        return RingElem.zero(tower)
    return _telescope_ring(tower, f.lift(tower))


def check_sigma_extension(tower: Tower, f: RingElem) -> bool:
    """True when sigma(s) = s + f may be adjoined (f does not telescope)"""
    return telescope(tower, f) is None


def _monomials(e: RingElem) -> List[Key]:
    keys = {key for key in e.terms}
    keys.add(e.zero_key)
    return sorted(keys)


def _sum_degree(tower: Tower, key: Key) -> int:
    exps, _ = key
    return sum(exps[i] for i in tower.sigma_indices)


def candidate_atoms(tower: Tower, f: RingElem, limit: Optional[int] = None) -> List[RingElem]:
    """
    Candidate summands sigma(psi) for the atomic reduction of f, best first.

    psi runs over x^j * M (j up to the polynomial degree of the coefficient of
    M in sigma^-1(f)) and x^i * M / R^t, where M is a monomial of
    sigma^-1(f), R an irreducible denominator factor of sigma^-1(f) or of the
    summand of a sum generator in its support (one per shift class), t up to
    its multiplicity and i < deg R. Quality is (sum degree of M, t, i or j).
    """
    limit = limit or get_settings().max_candidate_atoms
    ctx = tower.ctx
    body = sigma_apply(tower, f, -1)
    registry = ShiftClassRegistry()
    classes: Dict[int, Tuple] = {}

    def collect(c: FracElement) -> None:
        nonlocal registry
        if ctx.is_constant(c.denom):
            return
        _, factors = c.denom.factor_list()
        for factor, mult in factors:
            if ctx.x_degree(factor) <= 0:
                continue
            norm = normalize_x_primitive(ctx, factor)
            registry, index, _ = registry.register(ctx, norm)
            rep, known = classes.get(index, (norm, 0))
            classes[index] = (rep, max(known, mult))

    for c in body.coefficients():
        collect(c)
    for index in sorted(body.support()):
        gen = tower.gens[index]
        if gen.is_sigma:
            for c in sigma_apply(tower, gen.summand.lift(tower), -1).coefficients():
                collect(c)

    x = ctx.gen(ctx.var)
    scored: List[Tuple[Tuple[int, int, int], RingElem]] = []
    for key in _monomials(body):
        degree = _sum_degree(tower, key)
        c = body.terms.get(key)
        top = 0
        if c is not None:
            top = max(ctx.x_degree(c.numer) - ctx.x_degree(c.denom), 0)
        for j in range(top + 1):
            scored.append(((degree, 0, j), RingElem.monomial(tower, key, x ** j)))
        for index in sorted(classes):
            rep, mult = classes[index]
            for t in range(1, mult + 1):
                for i in range(ctx.x_degree(rep)):
                    psi = x ** i / ctx.frac(rep) ** t
                    scored.append(((degree, t, i), RingElem.monomial(tower, key, psi)))
    scored.sort(key=lambda item: item[0])
    atoms: List[RingElem] = []
    for _, psi in scored:
        atom = sigma_apply(tower, psi, 1)
        if atom and atom not in atoms:
            atoms.append(atom)
        if len(atoms) >= limit:
            break
    return atoms


def reduce_summand(tower: Tower, f: RingElem, atoms: Optional[List[RingElem]] = None) -> Optional[SummandReduction]:
    """
    Telescope f up to a combination of candidate atoms.

    The c-vectors of the joint first-order problem on [f, atoms] are
    row-reduced with the atoms ordered from worst to best and f last; the
    row with a nonzero f-entry and the largest pivot uses only the best
    atoms. Its pivot atom does not telescope.

    Returns:
        The reduction, or None when no relation with f exists
    """
    ctx = tower.ctx
    atoms = atoms if atoms is not None else candidate_atoms(tower, f)
    if not atoms:
        return None
    one = RingElem.one(tower)
    solutions = solve_fplde(tower, one, -one, [f] + atoms)
    if not solutions:
        return None
    order = list(range(len(atoms) - 1, -1, -1))
    n = len(atoms)
    rows = [[s.c[1 + j] for j in order] + [s.c[0]] for s in solutions]
    reduced = rref_with_transform(rows, n + 1, constant_domain(ctx))
    chosen = None
    for row, transform, pivot in reduced:
        if pivot < n and row[n]:
            if chosen is None or pivot > chosen[2]:
                chosen = (row, transform, pivot)
    if chosen is None:
        return None
    row, transform, pivot = chosen
    g = RingElem.zero(tower)
    for weight, solution in zip(transform, solutions):
        if weight:
            g = g + solution.g.scale(weight)
    lead = row[n]
    picked = [pivot] + [p for p in range(pivot + 1, n) if row[p]]
    return SummandReduction(
        g=g.scale(1 / lead),
        atoms=tuple(atoms[order[p]] for p in picked),
        coefficients=tuple(-row[p] / lead for p in picked),
    )


def _display(var: str, lower: int, body: Expr) -> Expr:
    index = fresh_name(all_names(body) | {var}, "i")
    return Sum(index, num(lower), Param(var), substitute(body, {var: Var(index)}))


def indefinite_sum(
    tower: Tower,
    spec: EvalSpec,
    f: RingElem,
    lower: int = 0,
    display_body: Optional[Expr] = None,
    atomic: Optional[bool] = None,
) -> IndefiniteSum:
    """
    An antidifference of f, extending the tower where needed.

    Args:
        tower: Current tower
        spec: Evaluation data of the tower
        f: Summand with sigma(g) - g = f sought
        lower: Smallest lower bound for a generator adjoined for f itself
        display_body: Expression of sigma^-1(f) in the tower variable, used
            to display a generator adjoined for f itself
        atomic: Try atomic reduction before adjoining f (default from settings)

    Returns:
        Extended tower and evaluation data with g
    """
    atomic = get_settings().atomic_reduction if atomic is None else atomic
    f = f.lift(tower)
    adjoined = 0
    for _ in range(get_settings().max_candidate_atoms + 1):
        g = telescope(tower, f)
        if g is not None:
            return IndefiniteSum(tower, spec, g, adjoined)
        reduction = reduce_summand(tower, f) if atomic else None
        if reduction is None:
            break
        atom = reduction.atoms[0]
        tower = adjoin_sigma(tower, atom, checked=True)
        adjoined += 1
        logger.debug(f"Adjoined atom {tower.gens[-1].name} for the atomic reduction")
        f = f.lift(tower)
    tower = adjoin_sigma(tower, f, checked=True)
    gen = tower.gens[-1]
    f = f.lift(tower)
    if display_body is not None:
        start = max(beta(tower, spec, f) + 1, 1, lower)
        spec = spec.with_entry(gen, GenSpec(start, tower.ctx.zero, _display(tower.ctx.var, start, display_body)))
    logger.debug(f"Adjoined sum generator {gen.name} for the summand itself")
    return IndefiniteSum(tower, spec, RingElem.gen(tower, tower.size - 1), adjoined + 1)
