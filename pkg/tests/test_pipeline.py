from fractions import Fraction

import pytest

from pisigma.errors import EmsFailure, ValidationError
from pisigma.evaluation.oracle import Evaluator, SeqOracle, evaluate_expr, germ_equal
from pisigma.expr.desugar import desugar
from pisigma.expr.nodes import HarmonicS, Param, Sum, children
from pisigma.expr.parser import parse
from pisigma.expr.sumspec import ParamBound, sum_spec_from_expr
from pisigma.expr.transform import substitute
from pisigma.pipeline.multisum import evaluate_multisum
from pisigma.pipeline.reduce import partial_fraction_reduce, sigma_generators_independent, sigma_reduce
from pisigma.recurrences.combine import find_linear_combination
from pisigma.recurrences.creative import certificate_holds, certificate_symbolic, generate_recurrence
from pisigma.recurrences.solve import solve_recurrence

A1 = "sum(k, 0, a, (1 - (n - 2*k)*S[1,k]) * binom(n,k)^(-1))"
A2 = "sum(k, 0, a, (1 - 2*(n - 2*k)*S[1,k]) * binom(n,k)^(-2))"
A3 = "sum(k, 0, n, (1 - 3*(n - 2*k)*S[1,k]) * binom(n,k)^(-3))"
A4 = "sum(k, 0, n, (1 - 4*(n - 2*k)*S[1,k]) * binom(n,k)^(-4))"

TRIPLE_SUM = (
    "sum(j, 0, n-2, sum(r, 0, j+1, sum(s, 0, n-j+r-2,"
    " (n-j-2)! * (-1)^(r+s) * binom(j+1,r) * r! / (n-j+r)! * binom(n-j+r-2,s) / ((n-s)*(s+1)))))"
)

LARGE_NESTED_SUM = (
    "sum(j, 0, n-3, sum(k, 0, j, sum(l, 0, k, sum(q, 0, n-j-3, sum(s, 1, n-l-q-3, sum(r, 0, n-l-q-s-3,"
    " binom(j+1,k+1) * binom(k,l) * binom(n-1,j+2) * binom(n-j-3,q) * binom(n-l-q-3,s)"
    " * binom(n-l-q-s-3,r) * r! * (n-l-q-r-s-3)! * (s-1)!"
    " / ((n-l-q-2)! * (n-j-1) * (n-q-r-s-2) * (q+s+1))"
    " * (-1)^(n-j+k-l-q-3) * (4*S[1,n-j-1] - 4*S[1,n-j-2] - 2*S[1,k]"
    " - (S[1,n-l-q-2] + S[1,n-l-q-r-s-3] - 2*S[1,r+s]) + 2*S[1,s-1] - 2*S[1,r+s])))))))"
)


def _agrees(lhs, rhs, var: str, start: int, stop: int, params=None) -> bool:
    return germ_equal(SeqOracle(params or {}), lhs, rhs, start, stop, var=var)


def test_rational_sum_telescopes_completely():
    result = sigma_reduce(parse("sum(k, 1, n, 1/(k*(k+1)))"), "n")
    assert result.tower.size == 0
    assert _agrees(result.expr, parse("1 - 1/(n+1)"), "n", result.validity, 20)


def test_harmonic_sum_stays_a_single_generator():
    result = sigma_reduce(parse("sum(k, 1, n, 1/k) + sum(k, 1, n, 1/(k+1))"), "n")
    assert len(result.tower.sigma_indices) == 1
    assert _agrees(result.expr, parse("2*S[1,n] - n/(n+1)"), "n", result.validity, 20)
    assert sigma_generators_independent(result.tower)


def test_factorial_sum_closes():
    result = sigma_reduce(parse("sum(k, 0, n, k * k!)"), "n")
    assert not result.tower.sigma_indices
    assert _agrees(result.expr, parse("(n+1)! - 1"), "n", result.validity, 15)


def test_partial_fractions_split_rational_summands():
    e = parse("sum(k, 1, n, 1/k + 1/k^2)")
    result = partial_fraction_reduce(e, "n")
    assert len(result.tower.sigma_indices) == 2
    assert _agrees(result.expr, e, "n", result.validity, 15)


def test_reduce_rejects_bad_input():
    with pytest.raises(ValidationError):
        sigma_reduce(parse("sum(k, 1, n, 1/k) / S[1,n]"), "n")
    with pytest.raises(ValidationError):
        sigma_reduce(parse("sum(k, 1, n, binom(m, k))"), "n")


def test_definite_binomial_sum():
    spec = sum_spec_from_expr(parse("sum(k, 0, n, binom(n,k))"), [ParamBound("n")])
    result = evaluate_multisum(spec)
    assert result.var == "n"
    for n in range(result.validity, result.validity + 10):
        assert evaluate_expr(result.expr, {"n": n}) == 2 ** n


def test_constant_multisum_is_evaluated_directly():
    spec = sum_spec_from_expr(parse("sum(i, 0, 3, sum(j, 0, i, binom(i,j)))"), [])
    assert evaluate_expr(evaluate_multisum(spec).expr, {}) == 15


def test_infinite_bounds_are_rejected_by_the_driver():
    spec = sum_spec_from_expr(parse("sum(k, 1, infinity, 1/k^2)"), [])
    with pytest.raises(EmsFailure) as info:
        evaluate_multisum(spec)
    assert info.value.step == "validate"
    assert info.value.exit_code == 4


def test_large_nested_sum_parses_and_desugars():
    e = parse(LARGE_NESTED_SUM)
    assert isinstance(e, Sum)
    assert not _contains_harmonic(desugar(e))


def _contains_harmonic(e) -> bool:
    if isinstance(e, HarmonicS):
        return True
    return any(_contains_harmonic(c) for c in children(e))


@pytest.mark.slow
def test_alternating_inverse_binomial_sum_reduces():
    e = parse(A1)
    result = sigma_reduce(e, "a", [ParamBound("n")])
    expected = parse("((a+1)*S[1,a] + 1) * binom(n,a)^(-1)")
    for n in (15, 20):
        assert _agrees(result.expr, expected, "a", max(result.validity, 0), 15, {"n": n})
    specialized = substitute(result.expr, {"a": Param("n")})
    assert _agrees(specialized, parse("(n+1)*S[1,n] + 1"), "n", 0, 15)


@pytest.mark.slow
def test_squared_inverse_binomial_sum_reduces():
    result = sigma_reduce(parse(A2), "a", [ParamBound("n")])
    expected = parse(
        "(n+1)^2/(n+2)^2 + (a+1)*(-a + 2*n + 2*(a+1)*(n+2)*S[1,a] + 3)/(n+2)^2 * binom(n,a)^(-2)"
    )
    for n in (15, 20):
        assert _agrees(result.expr, expected, "a", max(result.validity, 0), 15, {"n": n})
    specialized = substitute(result.expr, {"a": Param("n")})
    closed = parse("(n+1)^2/(n+2)^2 + (n + 2*(n^2+3*n+2)*S[1,n] + 3)*(n+1)/(n+2)^2")
    assert _agrees(specialized, closed, "n", 0, 15)


@pytest.mark.slow
def test_cubic_inverse_binomial_recurrence():
    e = parse(A3)
    recurrence = generate_recurrence(e.body, e.index, "n")
    assert recurrence.order == 2
    ctx = recurrence.ctx
    n = ctx.gen("n")
    expected = [
        (n + 2) ** 4 * (n + 3) ** 2,
        (n + 1) ** 3 * (n + 3) ** 2 * (2 * n + 5),
        (n + 1) ** 3 * (n + 2) ** 3,
    ]
    c = recurrence.coefficients
    for i in range(2):
        assert c[i] / c[2] == expected[i] / expected[2]
    assert certificate_symbolic(recurrence.certificate, "n") is True
    for point in (5, 8, 13):
        assert certificate_holds(recurrence.certificate, "n", {}, point, 20)


@pytest.mark.slow
def test_cubic_inverse_binomial_closed_form():
    e = parse(A3)
    recurrence = generate_recurrence(e.body, e.index, "n")
    solutions = solve_recurrence(recurrence)
    start = solutions.validity
    evaluator = Evaluator()
    initial = [evaluator.evaluate(e, {"n": k}) for k in (start, start + 1)]
    fitted = find_linear_combination(solutions, initial, start, target=e)
    expected = parse("(-1)^n*(5*S[-3,n]*(n+1)^3 - 6*S[-2,1,n]*(n+1)^3) + 6*S[1,n]*(n+1) + 1")
    assert [evaluate_expr(expected, {"n": k}) for k in (0, 1)] == [Fraction(1), Fraction(5)]
    assert _agrees(expected, e, "n", 0, 15)
    assert _agrees(fitted.expr, expected, "n", fitted.validity, 15)


@pytest.mark.slow
def test_quartic_inverse_binomial_sum_by_multisum():
    e = parse(A4)
    result = evaluate_multisum(sum_spec_from_expr(e, [ParamBound("n")]))
    assert _agrees(result.expr, e, "n", result.validity, 12)


@pytest.mark.slow
def test_triple_sum_by_multisum():
    e = parse(TRIPLE_SUM)
    result = evaluate_multisum(sum_spec_from_expr(e, [ParamBound("n", 2)]))
    expected = parse(
        "(-n^2 - n - 1)/(n^2*(n+1)^3) + (-1)^n*(n^2+n+1)/(n^2*(n+1)^3)"
        " + S[1,n]/(n+1)^2 - S[2,n]/(n+1) - 2*S[-2,n]/(n+1)"
    )
    assert _agrees(expected, e, "n", 2, 8)
    assert _agrees(result.expr, expected, "n", max(result.validity, 2), 14)


@pytest.mark.slow
def test_central_binomial_power_sums_combine():
    e = parse(
        "sum(k,1,a,k^4*binom(2*k,k)^2) + 249/20*sum(k,1,a,k^3*binom(2*k,k)^2)"
        " + 259/20*sum(k,1,a,k^2*binom(2*k,k)^2) + sum(k,1,a,binom(2*k,k)^2)"
        " + 2*sum(k,1,a,k*binom(2*k,k)^2)"
    )
    result = sigma_reduce(e, "a")
    expected = parse(
        "sum(i,1,a,binom(2*i,i)^2) - sum(i,1,a,i*binom(2*i,i)^2)"
        " + 1/15*a*(2*a+1)^2*(4*a+45)*binom(2*a,a)^2"
    )
    assert _agrees(expected, e, "a", 1, 15)
    assert _agrees(result.expr, expected, "a", max(result.validity, 1), 15)
    assert len(result.tower.sigma_indices) <= 2


@pytest.mark.slow
def test_harmonic_partial_fraction_example():
    e = parse(
        "sum(k,1,a, (k-2)/(10*(1+k^2)) + (1-4*k-2*k^2)*S[1,k]/(10*(1+k^2)*(2+2*k+k^2))"
        " + (1-4*k-2*k^2)*S[3,k]/(5*(1+k^2)*(2+2*k+k^2)))"
    )
    result = partial_fraction_reduce(e, "a")
    expected = parse(
        "(a^2+4*a+5)/(10*(a^2+2*a+2))*S[1,a] - (a-1)*(a+1)/(5*(a^2+2*a+2))*S[3,a]"
        " - 2/5*sum(k,1,a,1/k^2)"
    )
    assert _agrees(expected, e, "a", 1, 15)
    assert _agrees(result.expr, expected, "a", max(result.validity, 1), 15)


@pytest.mark.slow
def test_vanishing_weighted_sum():
    e = parse("sum(i, 0, n, (n - 2*i)*binom(n,i)^(-3))")
    result = evaluate_multisum(sum_spec_from_expr(e, [ParamBound("n")]))
    assert _agrees(result.expr, parse("0"), "n", result.validity, 15)
    assert all(Evaluator().evaluate(e, {"n": k}) == 0 for k in range(16))
