"""
Brute-force exact evaluation of expressions.

Supports:
- exact Fraction evaluation of every node kind by its defining formula
- memoization per (sub-expression, relevant assignment)
- germ comparison of two expressions over an index window

Nothing here uses the difference-field machinery; it is the independent
oracle every symbolic result is checked against.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from pisigma.errors import EvaluationError, PoleError, ValidationError
from pisigma.expr.nodes import (
    Add,
    Binom,
    Expr,
    Factorial,
    HarmonicS,
    Infinity,
    Mul,
    Num,
    Param,
    Pochhammer,
    Pow,
    Prod,
    SignPow,
    Sum,
    Var,
)
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound
from pisigma.expr.transform import free_symbols
from pisigma.logging_config import get_logger

logger = get_logger(__name__)


@lru_cache(maxsize=65536)
def _free(e: Expr) -> FrozenSet[str]:
    return frozenset(free_symbols(e))


@lru_cache(maxsize=4096)
def _factorial(n: int) -> int:
    result = 1
    for i in range(2, n + 1):
        result *= i
    return result


def _as_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise EvaluationError(f"{what} must be an integer, got {value}")
    return int(value)


class Evaluator:
    """Memoized exact evaluator; one instance may be reused across assignments"""

    def __init__(self):
        self._memo: Dict[Tuple[Expr, Tuple[Tuple[str, int], ...]], Fraction] = {}
        self._harmonic: Dict[Tuple[int, ...], List[Fraction]] = {}

    def evaluate(self, e: Expr, env: Mapping[str, int]) -> Fraction:
        if isinstance(e, Num):
            return e.value
        if isinstance(e, (Param, Var)):
            if e.name not in env:
                raise EvaluationError(f"no value for symbol {e.name!r}")
            return Fraction(env[e.name])
        key = (e, tuple(sorted((k, env[k]) for k in _free(e) if k in env)))
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        value = self._evaluate(e, env)
        self._memo[key] = value
        return value

    def _evaluate(self, e: Expr, env: Mapping[str, int]) -> Fraction:
        if isinstance(e, Add):
            return sum((self.evaluate(t, env) for t in e.terms), Fraction(0))
        if isinstance(e, Mul):
            result = Fraction(1)
            for factor in e.factors:
                result *= self.evaluate(factor, env)
                if result == 0:
                    # remaining factors must still be defined
                    for rest in e.factors:
                        self.evaluate(rest, env)
                    return Fraction(0)
            return result
        if isinstance(e, Pow):
            base = self.evaluate(e.base, env)
            if base == 0 and e.exp < 0:
                raise PoleError(f"division by zero in {pretty(e)}")
            return base ** e.exp
        if isinstance(e, (Sum, Prod)):
            return self._range(e, env)
        if isinstance(e, HarmonicS):
            upper = _as_int(self.evaluate(e.arg, env), "harmonic sum argument")
            return self.harmonic(e.indices, upper)
        if isinstance(e, Binom):
            top = self.evaluate(e.top, env)
            bottom = _as_int(self.evaluate(e.bottom, env), "binomial bottom")
            return binomial(top, bottom)
        if isinstance(e, Factorial):
            arg = _as_int(self.evaluate(e.arg, env), "factorial argument")
            if arg < 0:
                raise PoleError(f"factorial of negative integer {arg}")
            return Fraction(_factorial(arg))
        if isinstance(e, Pochhammer):
            base = self.evaluate(e.base, env)
            count = _as_int(self.evaluate(e.count, env), "pochhammer count")
            return pochhammer(base, count)
        if isinstance(e, SignPow):
            arg = _as_int(self.evaluate(e.arg, env), "sign exponent")
            return Fraction(-1 if arg % 2 else 1)
        if isinstance(e, Infinity):
            raise EvaluationError("cannot evaluate an infinite bound")
        raise EvaluationError(f"cannot evaluate {type(e).__name__}")

    def _range(self, e, env: Mapping[str, int]) -> Fraction:
        if isinstance(e.hi, Infinity):
            raise EvaluationError("infinite sums are not evaluated")
        lo = _as_int(self.evaluate(e.lo, env), "lower bound")
        hi = _as_int(self.evaluate(e.hi, env), "upper bound")
        inner = dict(env)
        if isinstance(e, Sum):
            total = Fraction(0)
            for i in range(lo, hi + 1):
                inner[e.index] = i
                total += self.evaluate(e.body, inner)
            return total
        product = Fraction(1)
        for i in range(lo, hi + 1):
            inner[e.index] = i
            product *= self.evaluate(e.body, inner)
        return product

    def harmonic(self, indices: Tuple[int, ...], upper: int) -> Fraction:
        """S_{indices}(upper) from the nested definition, prefix values cached"""
        if upper < 0:
            raise EvaluationError(f"harmonic sum at negative argument {upper}")
        values = self._harmonic.setdefault(indices, [Fraction(0)])
        first, rest = indices[0], indices[1:]
        while len(values) <= upper:
            i = len(values)
            term = Fraction(1, i ** abs(first))
            if first < 0 and i % 2:
                term = -term
            if rest:
                term *= self.harmonic(rest, i)
            values.append(values[-1] + term)
        return values[upper]


def binomial(top: Fraction, bottom: int) -> Fraction:
    """Generalized binomial: falling product over bottom!, 0 for negative bottom"""
    if bottom < 0:
        return Fraction(0)
    result = Fraction(1)
    for i in range(bottom):
        result *= (top - i)
    return result / _factorial(bottom)


def pochhammer(base: Fraction, count: int) -> Fraction:
    result = Fraction(1)
    if count >= 0:
        for i in range(count):
            result *= base + i
        return result
    for i in range(1, -count + 1):
        factor = base - i
        if factor == 0:
            raise PoleError("pochhammer symbol at a pole")
        result /= factor
    return result


def evaluate_expr(e: Expr, env: Optional[Mapping[str, int]] = None, evaluator: Optional[Evaluator] = None) -> Fraction:
    """
    Exact value of an expression under an integer assignment.

    Args:
        e: Expression
        env: Values of the free symbols
        evaluator: Memo to reuse across calls; a fresh one by default

    Returns:
        Exact rational value

    Raises:
        PoleError: division by zero or factorial of a negative integer
        EvaluationError: missing symbols or non-integer bounds
    """
    return (evaluator or Evaluator()).evaluate(e, dict(env or {}))


@dataclass
class SeqOracle:
    """Container for a parameter instantiation with its evaluation memo"""
    params: Dict[str, int] = field(default_factory=dict)
    evaluator: Evaluator = field(default_factory=Evaluator)
    bounds: Sequence[ParamBound] = ()

    def __post_init__(self):
        check_bounds(self.params, self.bounds)

    def value(self, e: Expr, var: Optional[str] = None, k: Optional[int] = None) -> Fraction:
        env = dict(self.params)
        if var is not None:
            env[var] = k
        return self.evaluator.evaluate(e, env)

    def sequence(self, e: Expr, var: str, start: int, stop: int) -> List[Optional[Fraction]]:
        """Values for var = start..stop; None at poles"""
        values = []
        for k in range(start, stop + 1):
            try:
                values.append(self.value(e, var, k))
            except PoleError:
                values.append(None)
        return values


def germ_equal(
    oracle: SeqOracle,
    e1: Expr,
    e2: Expr,
    start: int,
    stop: int,
    var: Optional[str] = None,
) -> bool:
    """
    Exact pointwise equality on [start, stop].

    Points where either side hits a pole are skipped with a warning; a
    window in which every point was skipped is not evidence of equality.

    Raises:
        ValidationError: a parameter value lies outside its declared bounds
    """
    if stop < start:
        raise ValueError("empty comparison window")
    check_bounds(oracle.params, oracle.bounds)
    if var is None:
        names = (_free(e1) | _free(e2)) - set(oracle.params)
        if len(names) > 1:
            raise EvaluationError(f"ambiguous free variables: {sorted(names)}")
        var = next(iter(names), "_unused")
    compared = 0
    for k in range(start, stop + 1):
        try:
            left = oracle.value(e1, var, k)
            right = oracle.value(e2, var, k)
        except PoleError as e:
            logger.warning(f"Skipping {var}={k} with params {oracle.params}: {e}")
            continue
        compared += 1
        if left != right:
            logger.debug(f"Germ mismatch at {var}={k}, params {oracle.params}: {left} != {right}")
            return False
    if not compared:
        logger.warning(f"No point of {var}={start}..{stop} could be evaluated")
        return False
    return True


def check_bounds(params: Mapping[str, int], bounds: Sequence[ParamBound]) -> None:
    """Reject parameter values outside their declared ranges"""
    for bound in bounds:
        if bound.name not in params:
            continue
        value = params[bound.name]
        if value < bound.lower or (bound.upper is not None and value > bound.upper):
            upper = "inf" if bound.upper is None else bound.upper
            raise ValidationError(f"{bound.name}={value} is outside its declared range {bound.lower}:{upper}")


def first_difference(
    oracle: SeqOracle, e1: Expr, e2: Expr, start: int, stop: int, var: str
) -> Optional[Tuple[int, Fraction, Fraction]]:
    """First point (k, lhs, rhs) where the two sides differ, or None"""
    for k in range(start, stop + 1):
        try:
            left = oracle.value(e1, var, k)
            right = oracle.value(e2, var, k)
        except PoleError:
            continue
        if left != right:
            return k, left, right
    return None


def parameter_samples(bounds: Sequence, count: int, seed: int = 0, spread: int = 6) -> List[Dict[str, int]]:
    """
    Deterministic parameter instantiations within declared bounds.

    Args:
        bounds: ParamBound-like objects (name, lower, upper)
        count: Number of instantiations
        seed: Seed of the random generator
        spread: Width of the sampled interval above each lower bound

    Returns:
        Distinct assignments when the bounds allow it; the first one puts
        every parameter a little above its lower bound
    """
    if not bounds:
        return [{}]
    rng = random.Random(seed)
    samples: List[Dict[str, int]] = []
    seen = set()
    for attempt in range(count * 10):
        env = {}
        for b in bounds:
            top = b.lower + spread if b.upper is None else min(b.upper, b.lower + spread)
            env[b.name] = min(b.lower + 2, top) if attempt == 0 else rng.randint(b.lower, top)
        key = tuple(sorted(env.items()))
        if key not in seen:
            seen.add(key)
            samples.append(env)
        if len(samples) >= count:
            break
    return samples
