import random
from fractions import Fraction

import pytest

from pisigma.errors import UnsupportedError
from pisigma.evaluation.spec import EvalSpec
from pisigma.field.ring import RingElem, sigma_once
from pisigma.field.tower import base_tower
from pisigma.solvers.hyper import annihilates, equivalent_ratios, hyper_ratios
from pisigma.solvers.plde import right_divide, solve_plde
from pisigma.solvers.polysol import constant_kernel, degree_bound, polynomial_solutions, universal_denominator
from pisigma.solvers.telescope import check_sigma_extension, indefinite_sum, telescope

SEEDS = range(200)


def test_universal_denominator(ctx):
    x = ctx.x
    # (x+1) y(x+1) - x y(x) = 0 is solved by 1/x
    assert universal_denominator(ctx, x + 1, -x) == x


def test_degree_bound(ctx):
    one = ctx.ring.one
    # y(x+1) - y(x) of degree 1 needs y of degree 2
    assert degree_bound(ctx, [-one, one], 1) == 2
    assert degree_bound(ctx, [-one, one], -1) == 0


def test_polynomial_solutions(ctx):
    x = ctx.x
    one = ctx.ring.one
    solutions = polynomial_solutions(ctx, [-one, one], [2 * x + 1])
    assert any(c[0] for c, _ in solutions)
    for c, y in solutions:
        assert ctx.shift(y, 1) - y == c[0] * ctx.frac(2 * x + 1)


def test_constant_kernel(sample_tower):
    tower, _ = sample_tower
    x = tower.ctx.gen("n")
    h = RingElem.gen(tower, tower.index("h"))
    elements = [h.scale(x), h.scale(2 * x), RingElem.const(tower, x)]
    kernel = constant_kernel(elements)
    assert len(kernel) == 1
    c = kernel[0]
    assert c[2] == 0
    assert 2 * c[0] + 4 * c[1] == 0


def test_rational_telescoping(ctx):
    x = ctx.gen("n")
    tower = base_tower(ctx)
    f = RingElem.const(tower, 1 / ((x + 1) * (x + 2)))
    g = telescope(tower, f)
    assert g is not None
    assert sigma_once(g) - g == f
    assert telescope(tower, RingElem.const(tower, 1 / (x + 1))) is None
    assert not check_sigma_extension(tower, RingElem.const(tower, x))


def test_telescoping_with_products(sample_tower):
    tower, _ = sample_tower
    x = tower.ctx.gen("n")
    p = RingElem.gen(tower, tower.index("p"))
    # sum of k * k! is (k+1)! - 1 up to a constant
    f = p.scale(x)
    g = telescope(tower, f)
    assert g is not None
    assert sigma_once(g) - g == f
    assert telescope(tower, p) is None


def test_indefinite_sum_adjoins_a_generator(ctx):
    x = ctx.gen("n")
    tower = base_tower(ctx)
    f = RingElem.const(tower, 1 / (x + 1) + 1 / (x + 1) ** 2)
    result = indefinite_sum(tower, EvalSpec(), f, atomic=False)
    assert result.adjoined == 1
    assert result.tower.size == 1
    g = result.g
    assert sigma_once(g) - g == f.lift(result.tower)


def test_atomic_reduction_splits_the_summand(ctx):
    x = ctx.gen("n")
    tower = base_tower(ctx)
    f = RingElem.const(tower, 1 / (x + 1) + 1 / (x + 1) ** 2)
    result = indefinite_sum(tower, EvalSpec(), f, atomic=True)
    assert result.adjoined >= 1
    assert result.tower.size == result.adjoined
    g = result.g
    assert sigma_once(g) - g == f.lift(result.tower)


def test_hyper_ratios_of_simple_recurrences(ctx):
    ring = ctx.ring
    ratios = hyper_ratios(ctx, [ring(-1), ring.zero, ring.one])
    assert sorted(ctx.to_fraction(r) for r in ratios) == [Fraction(-1), Fraction(1)]
    (ratio,) = hyper_ratios(ctx, [ring(-2), ring.one])
    assert ctx.to_fraction(ratio) == 2
    with pytest.raises(UnsupportedError):
        hyper_ratios(ctx, [ring.zero, ring.one])


def test_hyper_ratio_of_the_alternating_cubic_recurrence(ctx):
    x = ctx.x
    coeffs = [
        (x + 2) ** 4 * (x + 3) ** 2,
        (x + 1) ** 3 * (x + 3) ** 2 * (2 * x + 5),
        (x + 1) ** 3 * (x + 2) ** 3,
    ]
    n = ctx.gen("n")
    target = -(n + 2) ** 3 / (n + 1) ** 3
    assert annihilates(ctx, coeffs, target)
    ratios = hyper_ratios(ctx, coeffs)
    assert any(equivalent_ratios(ctx, r, target) for r in ratios)


def test_right_division(ctx):
    n = ctx.gen("n")
    # (sigma - 1)(sigma + 1) = sigma^2 - 1
    left = right_divide(ctx, [-ctx.one, ctx.zero, ctx.one], -ctx.one)
    assert left == [-ctx.one, ctx.one]
    with pytest.raises(ValueError):
        right_divide(ctx, [-ctx.one, ctx.zero, ctx.one], n)


def test_first_order_inhomogeneous_equation(ctx):
    x = ctx.gen("n")
    tower = base_tower(ctx)
    rhs = RingElem.const(tower, 1 / (x + 1))
    solution = solve_plde(tower, EvalSpec(), [-ctx.one, ctx.one], [rhs])
    (y,) = solution.particular
    (h,) = solution.homogeneous
    assert sigma_once(y) - y == rhs.lift(solution.tower)
    assert sigma_once(h) == h


def test_second_order_equation_with_hypergeometric_factors(ctx):
    tower = base_tower(ctx)
    solution = solve_plde(tower, EvalSpec(), [-ctx.one, ctx.zero, ctx.one])
    assert len(solution.homogeneous) == 2
    for h in solution.homogeneous:
        assert sigma_once(sigma_once(h)) == h


@pytest.mark.property
@pytest.mark.parametrize("seed", SEEDS)
def test_differences_telescope_back(seed, sample_tower, random_element):
    tower, _ = sample_tower
    rng = random.Random(seed)
    g = random_element(rng, terms=2)
    f = sigma_once(g) - g
    found = telescope(tower, f)
    assert found is not None
    assert sigma_once(found) - found == f
