import random
from fractions import Fraction
from math import comb

import pytest

from pisigma.algebra.context import get_context
from pisigma.errors import InconsistentSystemError, UnsupportedError, ValidationError
from pisigma.evaluation.oracle import Evaluator, evaluate_expr
from pisigma.expr.nodes import add
from pisigma.expr.parser import parse
from pisigma.recurrences.combine import find_linear_combination
from pisigma.recurrences.creative import certificate_holds, certificate_symbolic, generate_recurrence
from pisigma.recurrences.hyper import hyper_solutions
from pisigma.recurrences.model import Recurrence
from pisigma.recurrences.solve import check_solution, solve_recurrence
from pisigma.solvers.hyper import equivalent_ratios

SEEDS = range(200)

DEFINITE_SUMS = [
    "sum(k, 0, n, binom(n, k))",
    "sum(k, 0, n, k * binom(n, k))",
    "sum(k, 0, n, binom(n, k)^2)",
    "sum(k, 0, n, (-1)^k * binom(n, k))",
]


def _summand(text: str):
    e = parse(text)
    return e.body, e.index


def _recurrence(coefficients, rhs: str = "") -> Recurrence:
    ctx = get_context("n")
    n = ctx.gen("n")
    values = tuple(c(n) if callable(c) else ctx.const(c) for c in coefficients)
    return Recurrence("A", "n", (), values, parse(rhs) if rhs else add())


def _alternating_cubic() -> Recurrence:
    return _recurrence(
        [
            lambda n: (n + 2) ** 4 * (n + 3) ** 2,
            lambda n: (n + 1) ** 3 * (n + 3) ** 2 * (2 * n + 5),
            lambda n: (n + 1) ** 3 * (n + 2) ** 3,
        ]
    )


def _sequence_values(expr, start: int, count: int):
    return [evaluate_expr(expr, {"n": k}) for k in range(start, start + count)]


def test_binomial_row_sum_recurrence():
    summand, index = _summand(DEFINITE_SUMS[0])
    recurrence = generate_recurrence(summand, index, "n")
    assert recurrence.order == 1
    c0, c1 = recurrence.coefficients
    assert c0 / c1 == -2
    evaluator = Evaluator()
    for n in range(recurrence.validity, recurrence.validity + 6):
        values = [Fraction(2 ** n), Fraction(2 ** (n + 1))]
        assert recurrence.residual(values, n, {}, evaluator) == 0


def test_squared_binomial_sum_steps_over_the_certificate_pole():
    # the certificate of binom(n,k)^2 has a pole at k = n+1 where the summand vanishes
    summand, index = _summand(DEFINITE_SUMS[2])
    recurrence = generate_recurrence(summand, index, "n")
    assert recurrence.order == 1
    evaluator = Evaluator()
    for n in range(recurrence.validity, recurrence.validity + 6):
        values = [Fraction(comb(2 * n, n)), Fraction(comb(2 * n + 2, n + 1))]
        assert recurrence.residual(values, n, {}, evaluator) == 0


def test_certificate_checks_symbolically():
    summand, index = _summand(DEFINITE_SUMS[0])
    recurrence = generate_recurrence(summand, index, "n")
    assert certificate_symbolic(recurrence.certificate, "n") is True
    assert certificate_holds(recurrence.certificate, "n", {}, 9, 10)


def test_degenerate_summand_is_rejected():
    with pytest.raises(ValidationError):
        generate_recurrence(parse("3"), "k", "n")


def test_hyper_solutions_of_the_alternating_cubic_recurrence():
    recurrence = _alternating_cubic()
    ctx = recurrence.ctx
    n = ctx.gen("n")
    solutions = hyper_solutions(recurrence)
    assert any(equivalent_ratios(ctx, s.ratio, -(n + 2) ** 3 / (n + 1) ** 3) for s in solutions)
    with pytest.raises(UnsupportedError):
        hyper_solutions(_recurrence([1]))


def test_powers_of_two_from_one_initial_value():
    solutions = solve_recurrence(_recurrence([-2, 1]))
    start = solutions.validity
    fitted = find_linear_combination(solutions, [2 ** start], start)
    assert _sequence_values(fitted.expr, start, 8) == [Fraction(2 ** k) for k in range(start, start + 8)]


def test_period_two_recurrence_has_both_signs():
    recurrence = _recurrence([-1, 0, 1])
    solutions = solve_recurrence(recurrence)
    assert len(solutions.homogeneous) == 2
    for h in solutions.homogeneous:
        assert check_solution(recurrence, h)
    start = solutions.validity
    fitted = find_linear_combination(solutions, [3, 5], start)
    values = _sequence_values(fitted.expr, start, 6)
    assert values == [Fraction(3), Fraction(5)] * 3


def test_harmonic_numbers_from_a_first_order_recurrence():
    solutions = solve_recurrence(_recurrence([-1, 1], "1/(n+1)"))
    start = solutions.validity
    first = evaluate_expr(parse("S[1,n]"), {"n": start})
    fitted = find_linear_combination(solutions, [first], start, target=parse("S[1,n]"))
    expected = _sequence_values(parse("S[1,n]"), start, 8)
    assert _sequence_values(fitted.expr, start, 8) == expected


def test_fitting_errors():
    solutions = solve_recurrence(_recurrence([-1, 0, 1]))
    start = solutions.validity
    with pytest.raises(ValidationError):
        find_linear_combination(solutions, [1], start)
    one_step = solve_recurrence(_recurrence([-2, 1]))
    with pytest.raises(InconsistentSystemError):
        find_linear_combination(one_step, [1, 3], one_step.validity)


@pytest.fixture(scope="module")
def generated_recurrences():
    result = []
    for text in DEFINITE_SUMS:
        summand, index = _summand(text)
        result.append(generate_recurrence(summand, index, "n"))
    return result


@pytest.fixture(scope="module")
def solved_recurrences():
    recurrences = [
        _recurrence([-2, 1]),
        _recurrence([-1, 0, 1]),
        _recurrence([-1, 1], "1/(n+1)"),
        _recurrence([lambda n: -2 * (2 * n + 1), lambda n: n + 1]),
        _alternating_cubic(),
    ]
    return [solve_recurrence(r) for r in recurrences]


@pytest.mark.property
@pytest.mark.parametrize("seed", SEEDS)
def test_certificates_hold_at_random_points(seed, generated_recurrences):
    rng = random.Random(seed)
    recurrence = rng.choice(generated_recurrences)
    n = rng.randint(recurrence.certificate.lower + 1, 25)
    assert certificate_holds(recurrence.certificate, "n", {}, n, 12)


@pytest.mark.property
@pytest.mark.parametrize("seed", SEEDS)
def test_solutions_satisfy_their_recurrence(seed, solved_recurrences):
    rng = random.Random(seed)
    solutions = rng.choice(solved_recurrences)
    recurrence = solutions.recurrence
    ctx = recurrence.ctx
    y = solutions.particular
    for h in solutions.homogeneous:
        y = y + h.scale(ctx.const(Fraction(rng.randint(-3, 3), rng.randint(1, 3))))
    expr = solutions.render(y)
    n = rng.randint(solutions.validity, solutions.validity + 10)
    values = _sequence_values(expr, n, recurrence.order + 1)
    assert recurrence.residual(values, n, {}, Evaluator()) == 0
