import random
from fractions import Fraction

import pytest

from pisigma.errors import ParseError, UnsupportedError, ValidationError
from pisigma.evaluation.oracle import evaluate_expr
from pisigma.expr.desugar import check_polynomial_sums
from pisigma.expr.linear import integer_linear_form
from pisigma.expr.nodes import Add, Binom, HarmonicS, Infinity, Mul, Num, Param, Pow, SignPow, Sum, Var, num
from pisigma.expr.parser import parse
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound, sum_spec_from_expr
from pisigma.expr.transform import free_symbols, substitute

SEEDS = range(200)


def test_free_identifiers_are_parameters_and_indices_are_bound():
    e = parse("sum(k, 0, n, binom(n, k))")
    assert isinstance(e, Sum)
    assert e.hi == Param("n")
    assert e.body == Binom(Param("n"), Var("k"))
    assert free_symbols(e) == {"n"}


def test_literals_and_powers():
    assert parse("2/3") == Num(Fraction(2, 3))
    assert parse("binom(n,k)^(-3)") == Pow(Binom(Param("n"), Param("k")), -3)
    assert parse("(-1)^n") == SignPow(Param("n"))
    assert parse("S[-2,1,n]") == HarmonicS((-2, 1), Param("n"))


def test_division_and_negation_shapes():
    e = parse("a - b/c")
    assert isinstance(e, Add)
    assert e.terms[1] == Mul((Num(-1), Param("b"), Pow(Param("c"), -1)))


def test_parse_error_reports_byte_offset():
    with pytest.raises(ParseError) as info:
        parse("binom(n, k")
    assert info.value.offset == len("binom(n, k")
    with pytest.raises(ParseError) as info:
        parse("n + $")
    assert info.value.offset == 4


def test_rational_literals_only_start_a_term():
    assert parse("-2/3") == Num(Fraction(-2, 3))
    assert evaluate_expr(parse("n/2/3"), {"n": 6}) == 1
    assert evaluate_expr(parse("n^2/3"), {"n": 3}) == 3
    assert evaluate_expr(parse("1/2^3")) == Fraction(1, 8)
    assert evaluate_expr(parse("2/3*n"), {"n": 3}) == 2
    assert evaluate_expr(parse("a - 2/3"), {"a": 1}) == Fraction(1, 3)
    with pytest.raises(ParseError):
        parse("1/0")


def test_non_integer_exponent_is_rejected():
    with pytest.raises(ParseError):
        parse("n^k")


def test_infinity_only_as_sum_upper_bound():
    assert parse("sum(k, 1, infinity, 1/k^2)").hi == Infinity()
    with pytest.raises(ParseError):
        parse("infinity + 1")
    with pytest.raises(ParseError):
        parse("prod(k, 1, infinity, k)")


def test_scope_check():
    with pytest.raises(ValidationError):
        parse("binom(n, a)", ["n"])
    with pytest.raises(ValidationError):
        parse("sum(n, 0, a, n)", ["n", "a"])
    assert free_symbols(parse("sum(k, 0, a, binom(n, k))", ["n", "a"])) == {"n", "a"}


def test_plain_printing_is_readable():
    assert pretty(parse("a - b")) == "a - b"
    assert pretty(parse("-n")) == "-n"
    assert pretty(parse("(a + b) + c")) == "(a + b) + c"
    assert pretty(parse("S[1,k]/(k+1)^2")) == "S[1,k]/((k + 1)^2)"


def test_latex_printing():
    assert pretty(parse("S[-2,1,n]"), "latex") == "S_{-2,1}(n)"
    assert pretty(parse("binom(n,k)"), "latex") == "\\binom{n}{k}"
    assert pretty(parse("sum(k,0,n, k)"), "latex") == "\\sum_{k=0}^{n} k"
    with pytest.raises(ValueError):
        pretty(parse("n"), "html")


def test_substitute_respects_binders():
    e = parse("k + sum(k, 0, n, k)")
    replaced = substitute(e, {"k": num(3)})
    assert pretty(replaced) == "3 + sum(k,0,n, k)"


def test_integer_linear_forms():
    form = integer_linear_form(parse("2*n - k + 3"))
    assert form.coefficient("n") == 2
    assert form.coefficient("k") == -1
    assert form.const == 3
    with pytest.raises(UnsupportedError):
        integer_linear_form(parse("n/2"))


def test_sum_spec_from_nested_sums():
    spec = sum_spec_from_expr(
        parse("sum(i, 0, n, sum(j, 0, i, binom(i, j)))"), [ParamBound("n")]
    )
    assert [r.index for r in spec.ranges] == ["i", "j"]
    assert spec.param_names == ("n",)


def test_polynomial_sums_must_have_finite_polynomial_bodies():
    check_polynomial_sums(parse("sum(k, 0, n, k^2 * S[1,k])"))
    with pytest.raises(ValidationError):
        check_polynomial_sums(parse("1/S[1,n]"))


def _random_atom(rng: random.Random, depth: int, bound: list) -> str:
    names = ["n", "a"] + bound
    choice = rng.randrange(9 if depth > 0 else 4)
    if choice == 0:
        return str(rng.randint(0, 9))
    if choice == 1:
        return f"{rng.randint(1, 9)}/{rng.randint(2, 9)}"
    if choice in (2, 3):
        return rng.choice(names)
    if choice == 4:
        return f"binom({_random_expr(rng, depth - 1, bound)},{rng.choice(names)})"
    if choice == 5:
        indices = ",".join(str(rng.choice([-3, -2, -1, 1, 2, 3])) for _ in range(rng.randint(1, 3)))
        return f"S[{indices},{rng.choice(names)}]"
    if choice == 6:
        index = f"i{len(bound)}"
        body = _random_expr(rng, depth - 1, bound + [index])
        return f"sum({index},0,{rng.choice(names)},{body})"
    if choice == 7:
        return f"((-1)^({_random_expr(rng, depth - 1, bound)}))"
    return f"({_random_expr(rng, depth - 1, bound)})"


def _random_factor(rng: random.Random, depth: int, bound: list) -> str:
    text = _random_atom(rng, depth, bound)
    roll = rng.random()
    if roll < 0.15:
        return f"{text}^{rng.randint(0, 4)}"
    if roll < 0.25:
        return f"{text}^(-{rng.randint(1, 3)})"
    if roll < 0.3:
        return f"-{text}"
    if roll < 0.35:
        return f"{text}!"
    return text


def _random_expr(rng: random.Random, depth: int, bound: list) -> str:
    terms = []
    for _ in range(rng.randint(1, 3)):
        factors = [_random_factor(rng, depth, bound) for _ in range(rng.randint(1, 3))]
        term = factors[0]
        for f in factors[1:]:
            term += rng.choice(["*", "/"]) + f
        terms.append(term)
    text = terms[0]
    for t in terms[1:]:
        text += rng.choice([" + ", " - "]) + t
    return text


@pytest.mark.property
@pytest.mark.parametrize("seed", SEEDS)
def test_plain_printing_round_trips(seed):
    rng = random.Random(seed)
    e = parse(_random_expr(rng, 3, []))
    assert parse(pretty(e)) == e
