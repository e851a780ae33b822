from fractions import Fraction

import pytest

from pisigma.algebra.context import get_context, transfer
from pisigma.algebra.linalg import constant_domain, nullspace, solve_linear
from pisigma.algebra.polytools import (
    dispersion_set,
    gcd_unipoly,
    integer_roots,
    nonnegative_integer_roots,
    normalize_x_primitive,
    poly_lcm,
)
from pisigma.algebra.shiftclass import ShiftClassRegistry, shift_distance
from pisigma.errors import PoleError


def test_context_is_cached_and_rejects_clashes():
    assert get_context("n", ("a",)) is get_context("n", ("a",))
    with pytest.raises(ValueError):
        get_context("n", ("n",))


def test_shift_and_evaluation(ctx):
    n = ctx.gen("n")
    f = 1 / (n * (n + 1))
    assert ctx.shift(f, 1) == 1 / ((n + 1) * (n + 2))
    assert ctx.to_fraction(ctx.at(f, 2)) == Fraction(1, 6)
    with pytest.raises(PoleError):
        ctx.at(f, 0)


def test_constants_do_not_depend_on_the_variable(param_ctx):
    n = param_ctx.gen("n")
    k = param_ctx.gen("k")
    assert param_ctx.is_constant(n ** 2 + 1)
    assert not param_ctx.is_constant(k / n)


def test_transfer_between_contexts(param_ctx):
    small = get_context("n")
    f = small.gen("n") ** 2 + 3
    moved = transfer(f, param_ctx)
    assert moved == param_ctx.gen("n") ** 2 + 3


def test_gcd_is_normalized(ctx):
    x = ctx.x
    assert gcd_unipoly(ctx, (x + 1) * (x + 2), 3 * (x + 2) * (x + 3)) == x + 2
    assert gcd_unipoly(ctx, x + 1, x + 2) == ctx.ring.one


def test_normalize_drops_parameter_content(param_ctx):
    k = param_ctx.poly_gen("k")
    n = param_ctx.poly_gen("n")
    assert normalize_x_primitive(param_ctx, -2 * n * (k + n)) == k + n


def test_integer_roots(ctx):
    x = ctx.x
    p = (x - 2) * (x + 5) * (2 * x + 1)
    assert integer_roots(p) == {2, -5}
    assert nonnegative_integer_roots(p) == {2}


def test_integer_roots_with_parameters(param_ctx):
    k = param_ctx.poly_gen("k")
    n = param_ctx.poly_gen("n")
    # k - n has no unconditional integer root; k - 3 does
    assert integer_roots((k - n) * (k - 3)) == {3}


def test_dispersion(ctx):
    x = ctx.x
    assert dispersion_set(ctx, x + 3, x) == {3}
    assert dispersion_set(ctx, x * (x + 2), x) == {0, 2}
    assert dispersion_set(ctx, x ** 2 + 1, x) == set()


def test_lcm(ctx):
    x = ctx.x
    assert poly_lcm(ctx, x * (x + 1), x) == x * (x + 1)
    assert poly_lcm(ctx, x, ctx.ring.zero) == x


def test_shift_classes(ctx):
    x = ctx.x
    assert shift_distance(ctx, x + 1, x + 4) == 3
    assert shift_distance(ctx, x ** 2 + 1, x ** 2 + 2 * x + 2) == 1
    assert shift_distance(ctx, x ** 2 + 1, x ** 2 + 2) is None
    registry, first, _ = ShiftClassRegistry().register(ctx, 2 * x + 2)
    registry, again, j = registry.register(ctx, x + 7)
    assert first == again == 0
    assert j == 6
    registry, other, _ = registry.register(ctx, x ** 2 + 1)
    assert other == 1


def test_linear_algebra(ctx):
    domain = constant_domain(ctx)
    one, two, zero = domain.convert(1), domain.convert(2), domain.zero
    rows = [[one, two, zero], [two, domain.convert(4), zero]]
    basis = nullspace(rows, 3, domain)
    assert len(basis) == 2
    for v in basis:
        assert v[0] + 2 * v[1] == zero
    assert solve_linear([[one, one]], [two], 2, domain) is not None
    assert solve_linear([[one, one], [one, one]], [one, two], 2, domain) is None


def test_dispersion_of_a_downward_shift(ctx):
    x = ctx.x
    assert dispersion_set(ctx, x, x - 3) == {3}
    assert dispersion_set(ctx, x - 3, x) == set()
    assert dispersion_set(ctx, (x - 1) * (x - 4), x) == set()
    assert dispersion_set(ctx, x, (x - 1) * (x - 4)) == {1, 4}


def test_dispersion_with_parameters(param_ctx):
    k = param_ctx.poly_gen("k")
    n = param_ctx.poly_gen("n")
    assert dispersion_set(param_ctx, k + 3, k) == {3}
    assert dispersion_set(param_ctx, k, k - 3) == {3}
    # k - n + j = k + 3 only for j = n + 3, which is not an unconditional integer
    assert dispersion_set(param_ctx, (k - n) * (k + 3), k - n) == {0}
    assert dispersion_set(param_ctx, k - n, k + 1) == set()


def test_gcd_with_a_parameter_dependent_factor(param_ctx):
    k = param_ctx.poly_gen("k")
    n = param_ctx.poly_gen("n")
    assert gcd_unipoly(param_ctx, (k - n) * (k + 1), (k - n) * (k + 2)) == k - n
