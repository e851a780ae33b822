import random
from fractions import Fraction

import pytest

from pisigma.errors import EvaluationError, PoleError, ValidationError
from pisigma.evaluation import oracle as oracle_module
from pisigma.evaluation.ev import beta, ev
from pisigma.evaluation.oracle import (
    Evaluator,
    SeqOracle,
    evaluate_expr,
    first_difference,
    germ_equal,
    parameter_samples,
)
from pisigma.evaluation.render import to_expression
from pisigma.expr.parser import parse
from pisigma.expr.sumspec import ParamBound
from pisigma.field.combination import Combination
from pisigma.field.ring import RingElem, sigma_apply

SEEDS = range(200)


@pytest.mark.parametrize(
    "text, env, expected",
    [
        ("S[1,n]", {"n": 3}, Fraction(11, 6)),
        ("S[-3,n]", {"n": 2}, Fraction(-7, 8)),
        ("S[-2,1,n]", {"n": 2}, Fraction(-5, 8)),
        ("binom(n,k)", {"n": 5, "k": 2}, Fraction(10)),
        ("binom(n,k)", {"n": 2, "k": 5}, Fraction(0)),
        ("binom(-1/2,k)", {"k": 2}, Fraction(3, 8)),
        ("pochhammer(n,3)", {"n": 2}, Fraction(24)),
        ("factorial(n)", {"n": 5}, Fraction(120)),
        ("(-1)^(n+1)", {"n": 4}, Fraction(-1)),
        ("sum(k, 0, n, binom(n,k))", {"n": 6}, Fraction(64)),
        ("sum(k, 3, 2, k)", {}, Fraction(0)),
        ("prod(i, 1, n, (i+1)/i)", {"n": 7}, Fraction(8)),
    ],
)
def test_exact_values(text, env, expected):
    assert evaluate_expr(parse(text), env) == expected


def test_poles_and_missing_symbols():
    with pytest.raises(PoleError):
        evaluate_expr(parse("1/(n-2)"), {"n": 2})
    with pytest.raises(PoleError):
        evaluate_expr(parse("binom(n,k)^(-1)"), {"n": 2, "k": 3})
    with pytest.raises(PoleError):
        evaluate_expr(parse("factorial(n-3)"), {"n": 1})
    with pytest.raises(EvaluationError):
        evaluate_expr(parse("n + a"), {"n": 1})
    with pytest.raises(EvaluationError):
        evaluate_expr(parse("S[1,n/2]"), {"n": 3})


def test_germ_comparison():
    oracle = SeqOracle()
    assert germ_equal(oracle, parse("sum(k,1,n,1/(k*(k+1)))"), parse("1 - 1/(n+1)"), 0, 15)
    assert not germ_equal(oracle, parse("S[1,n]"), parse("S[2,n]"), 0, 5)
    assert first_difference(oracle, parse("S[1,n]"), parse("S[2,n]"), 0, 5, "n") == (2, Fraction(3, 2), Fraction(5, 4))


def test_germ_comparison_skips_poles():
    oracle = SeqOracle()
    assert germ_equal(oracle, parse("(n-1)/(n-1)"), parse("1"), 0, 5, var="n")


def test_germ_comparison_needs_one_defined_point():
    oracle = SeqOracle()
    assert not germ_equal(oracle, parse("1/(n-n)"), parse("0"), 0, 5, var="n")
    assert not germ_equal(oracle, parse("0"), parse("1/(n-n)"), 0, 5, var="n")


def test_parameters_outside_their_bounds_are_rejected():
    bounds = [ParamBound("a", 1, 4)]
    with pytest.raises(ValidationError):
        SeqOracle({"a": 0}, bounds=bounds)
    with pytest.raises(ValidationError):
        SeqOracle({"a": 5}, bounds=bounds)
    oracle = SeqOracle({"a": 2}, bounds=bounds)
    assert germ_equal(oracle, parse("a*n"), parse("n*a"), 0, 4, var="n")
    oracle.params["a"] = 7
    with pytest.raises(ValidationError):
        germ_equal(oracle, parse("a*n"), parse("n*a"), 0, 4, var="n")


def test_evaluations_keep_their_memo_per_call():
    evaluator = Evaluator()
    e = parse("sum(k, 1, n, 1/k)")
    assert evaluate_expr(e, {"n": 4}, evaluator) == Fraction(25, 12)
    assert evaluator._memo
    assert evaluate_expr(e, {"n": 4}) == Fraction(25, 12)
    assert not hasattr(oracle_module, "_default_evaluator")


def test_parameter_samples_respect_bounds():
    bounds = [ParamBound("a", 1, 4), ParamBound("b", 0)]
    samples = parameter_samples(bounds, 8)
    assert len(samples) == len({tuple(sorted(s.items())) for s in samples})
    assert samples[0] == {"a": 3, "b": 2}
    for s in samples:
        assert 1 <= s["a"] <= 4
        assert s["b"] >= 0
    assert parameter_samples([], 5) == [{}]


def test_generator_values(sample_tower):
    tower, spec = sample_tower
    ctx = tower.ctx
    p = RingElem.gen(tower, tower.index("p"))
    h = RingElem.gen(tower, tower.index("h"))
    a = RingElem.gen(tower, tower.index("a"))
    assert ev(tower, spec, p, 5) == ctx.const(120)
    assert ev(tower, spec, h, 4) == ctx.const(Fraction(25, 12))
    assert ev(tower, spec, a, 3) == ctx.const(Fraction(5, 6))
    assert ev(tower, spec, RingElem.sign(tower), 3) == ctx.const(-1)


def test_beta_accounts_for_coefficient_poles(sample_tower):
    tower, spec = sample_tower
    x = tower.ctx.gen("n")
    e = RingElem.const(tower, 1 / (x - 4))
    assert beta(tower, spec, e) == 5


def test_rendering_reads_back_the_same_sequence(sample_tower):
    tower, spec = sample_tower
    x = tower.ctx.gen("n")
    h = RingElem.gen(tower, tower.index("h"))
    p = RingElem.gen(tower, tower.index("p"))
    e = Combination.of(h * h.scale(x) + p.scale(1 / (x + 1)) - RingElem.sign(tower))
    rendered = to_expression(tower, spec, e)
    for k in range(1, 9):
        assert evaluate_expr(rendered, {"n": k}) == tower.ctx.to_fraction(ev(tower, spec, e.part(e.keys[0]), k))


@pytest.mark.property
@pytest.mark.parametrize("seed", SEEDS)
def test_evaluation_is_a_homomorphism_past_beta(seed, sample_tower, random_element):
    tower, spec = sample_tower
    rng = random.Random(seed)
    a = random_element(rng)
    b = random_element(rng)
    start = max(beta(tower, spec, a), beta(tower, spec, b))
    for k in range(start, start + 6):
        assert ev(tower, spec, a * b, k) == ev(tower, spec, a, k) * ev(tower, spec, b, k)
        assert ev(tower, spec, a + b, k) == ev(tower, spec, a, k) + ev(tower, spec, b, k)


@pytest.mark.property
@pytest.mark.parametrize("seed", SEEDS)
def test_evaluation_commutes_with_shifts_past_beta(seed, sample_tower, random_element):
    tower, spec = sample_tower
    rng = random.Random(seed)
    e = random_element(rng)
    j = rng.randint(-2, 2)
    start = beta(tower, spec, e) + max(0, -j)
    shifted = sigma_apply(tower, e, j)
    for k in range(start, start + 6):
        assert ev(tower, spec, shifted, k) == ev(tower, spec, e, k + j)
