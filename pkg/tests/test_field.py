import random

import pytest

from pisigma.algebra.context import get_context
from pisigma.construction.atoms import shift_ratio
from pisigma.construction.constants import factorial_ratio, rising
from pisigma.errors import PoleError, UndecidedError, ValidationError
from pisigma.expr.parser import parse
from pisigma.field.combination import UNIT_KEY, Combination
from pisigma.field.extensions import adjoin_pi, adjoin_sigma, check_pi_extension
from pisigma.field.ring import RingElem, sigma_apply, sigma_once
from pisigma.field.tower import base_tower

SEEDS = range(200)


def test_generators_shift_by_their_definition(sample_tower):
    tower, _ = sample_tower
    ctx = tower.ctx
    x = ctx.gen("n")
    p = RingElem.gen(tower, tower.index("p"))
    h = RingElem.gen(tower, tower.index("h"))
    m = RingElem.sign(tower)
    assert sigma_once(p) == p.scale(x + 1)
    assert sigma_once(h) == h + RingElem.const(tower, 1 / (x + 1))
    assert sigma_once(m) == -m
    assert m * m == RingElem.one(tower)


def test_units_and_inverses(sample_tower):
    tower, _ = sample_tower
    p = RingElem.gen(tower, tower.index("p"))
    h = RingElem.gen(tower, tower.index("h"))
    assert p.is_unit()
    assert p * p.inverse() == RingElem.one(tower)
    assert not h.is_unit()
    with pytest.raises(ZeroDivisionError):
        h.inverse()


def test_lift_into_extension(sample_tower):
    tower, _ = sample_tower
    ctx = tower.ctx
    x = ctx.gen("n")
    h = RingElem.gen(tower, tower.index("h"))
    bigger = adjoin_sigma(tower, RingElem.const(tower, 1 / (x + 1) ** 2), "h2")
    lifted = h.lift(bigger)
    assert lifted.tower is bigger
    assert lifted == h
    with pytest.raises(ValueError):
        RingElem.gen(bigger, bigger.index("h2")).lift(tower)


def test_telescoping_summand_is_not_admissible(ctx):
    x = ctx.gen("n")
    tower = base_tower(ctx)
    with pytest.raises(ValidationError):
        adjoin_sigma(tower, RingElem.const(tower, 1 / ((x + 1) * (x + 2))))


def test_pi_extension_checks(ctx):
    x = ctx.gen("n")
    tower = base_tower(ctx)
    assert check_pi_extension(tower, x + 1) is None
    tower = adjoin_pi(tower, x + 1, "p")
    relation = check_pi_extension(tower, x + 2)
    assert relation is not None
    assert relation.power == 1
    assert sigma_once(relation.element) == relation.element.scale(x + 2)
    with pytest.raises(ValidationError):
        adjoin_pi(tower, x + 3)


def test_negative_ratio_without_sign_needs_a_square(ctx):
    x = ctx.gen("n")
    tower = adjoin_pi(base_tower(ctx), x + 1, "p")
    relation = check_pi_extension(tower, -(x + 1))
    assert relation.power == 2
    assert sigma_once(relation.element) == relation.element.scale((x + 1) ** 2)


def test_dependency_above_the_power_limit_is_undecided(ctx):
    x = ctx.gen("n")
    tower = adjoin_pi(base_tower(ctx), (x + 1) ** 2, "q")
    assert check_pi_extension(tower, x + 1).power == 2
    with pytest.raises(UndecidedError):
        check_pi_extension(tower, x + 1, max_power=1)


def test_combinations_keep_opaque_parts_apart(sample_tower):
    tower, _ = sample_tower
    from pisigma.expr.parser import parse

    h = RingElem.gen(tower, tower.index("h"))
    key_atom = parse("factorial(a)")
    c = Combination.of(h) + Combination.atom(tower, key_atom) * Combination.of(h)
    assert len(c.parts) == 2
    assert c.part(UNIT_KEY) == h
    assert not c.is_ring()
    assert (c - c).parts == {}


@pytest.mark.property
@pytest.mark.parametrize("seed", SEEDS)
def test_sigma_is_a_ring_automorphism(seed, sample_tower, random_element):
    tower, _ = sample_tower
    rng = random.Random(seed)
    a = random_element(rng)
    b = random_element(rng)
    assert sigma_once(a * b) == sigma_once(a) * sigma_once(b)
    assert sigma_once(a + b) == sigma_once(a) + sigma_once(b)
    assert sigma_once(sigma_once(a), -1) == a
    j = rng.randint(-2, 2)
    assert sigma_apply(tower, sigma_apply(tower, a, j), -j) == a


def test_sigma_fixes_constants():
    ctx = get_context("k", ("n",))
    tower = base_tower(ctx)
    n = ctx.gen("n")
    c = RingElem.const(tower, n ** 2 + 1)
    assert sigma_once(c) == c


def test_rising_and_factorial_ratios_stay_in_the_field(ctx):
    n = ctx.gen("n")
    zero = ctx.zero
    assert rising(zero, 2) == zero
    assert rising(zero, 0) == ctx.one
    assert factorial_ratio(zero, 0) == ctx.one
    assert factorial_ratio(zero, 2) == ctx.const(2)
    assert factorial_ratio(n, 2) == (n + 1) * (n + 2)
    assert factorial_ratio(n, -2) == 1 / ((n - 1) * n)
    with pytest.raises(PoleError):
        factorial_ratio(zero, -1)


def test_rising_on_a_parameter(param_ctx):
    n = param_ctx.gen("n")
    assert rising(n, 3) == n * (n + 1) * (n + 2)
    assert rising(n - n, 3) == param_ctx.zero


@pytest.mark.parametrize(
    "text, expected",
    [
        ("binom(n+1,n+1)", lambda n: 1),
        ("binom(n,n)", lambda n: 1),
        ("factorial(n)", lambda n: n + 1),
        ("pochhammer(n,2)", lambda n: (n + 2) / n),
        ("binom(2*n,n)", lambda n: 2 * (2 * n + 1) / (n + 1)),
    ],
)
def test_shift_ratios_of_atoms(ctx, text, expected):
    assert shift_ratio(ctx, parse(text)) == expected(ctx.gen("n"))


def test_binomial_shift_ratio_in_the_summation_index(param_ctx):
    k = param_ctx.gen("k")
    n = param_ctx.gen("n")
    assert shift_ratio(param_ctx, parse("binom(n,k)")) == (n - k) / (k + 1)
