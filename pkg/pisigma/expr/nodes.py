"""
Expression tree for nested hypergeometric sum expressions.

Nodes are frozen dataclasses: structural equality and hashing come for free,
and trees can be shared. The raw constructors keep exactly the structure they
are given (the parser relies on that for round trips); the lower-case helpers
(add, mul, power, ...) flatten and fold numbers and are used by every
component that builds expressions programmatically.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union


class Expr:
    """Base class of all expression nodes"""

    __slots__ = ()

    def __add__(self, other: "ExprLike") -> "Expr":
        return add(self, as_expr(other))

    def __radd__(self, other: "ExprLike") -> "Expr":
        return add(as_expr(other), self)

    def __sub__(self, other: "ExprLike") -> "Expr":
        return add(self, neg(as_expr(other)))

    def __rsub__(self, other: "ExprLike") -> "Expr":
        return add(as_expr(other), neg(self))

    def __mul__(self, other: "ExprLike") -> "Expr":
        return mul(self, as_expr(other))

    def __rmul__(self, other: "ExprLike") -> "Expr":
        return mul(as_expr(other), self)

    def __truediv__(self, other: "ExprLike") -> "Expr":
        return mul(self, power(as_expr(other), -1))

    def __neg__(self) -> "Expr":
        return neg(self)

    def __pow__(self, exponent: int) -> "Expr":
        return power(self, exponent)


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Param(Expr):
    """Free symbol: a declared parameter or the distinguished variable"""
    name: str


@dataclass(frozen=True)
class Var(Expr):
    """Bound summation or product index"""
    name: str


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: int


@dataclass(frozen=True)
class Sum(Expr):
    index: str
    lo: Expr
    hi: Expr
    body: Expr


@dataclass(frozen=True)
class Prod(Expr):
    index: str
    lo: Expr
    hi: Expr
    body: Expr


@dataclass(frozen=True)
class HarmonicS(Expr):
    indices: Tuple[int, ...]
    arg: Expr


@dataclass(frozen=True)
class Binom(Expr):
    top: Expr
    bottom: Expr


@dataclass(frozen=True)
class Factorial(Expr):
    arg: Expr


@dataclass(frozen=True)
class Pochhammer(Expr):
    base: Expr
    count: Expr


@dataclass(frozen=True)
class SignPow(Expr):
    """(-1)^arg"""
    arg: Expr


@dataclass(frozen=True)
class Infinity(Expr):
    """Upper bound marker, only valid as a sum upper bound"""


ExprLike = Union[Expr, int, Fraction]

ZERO = Num(Fraction(0))
ONE = Num(Fraction(1))
MINUS_ONE = Num(Fraction(-1))

BINDERS = (Sum, Prod)
ATOM_TYPES = (Binom, Factorial, Pochhammer, SignPow)


def as_expr(value: ExprLike) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Num(Fraction(value))
    raise TypeError(f"cannot convert {value!r} to an expression")


def num(value: Union[int, Fraction]) -> Num:
    return Num(Fraction(value))


def is_num(e: Expr, value=None) -> bool:
    if not isinstance(e, Num):
        return False
    return value is None or e.value == value


def add(*terms: ExprLike) -> Expr:
    """Flattening sum; numbers folded into one trailing constant, zeros dropped"""
    flat = []
    constant = Fraction(0)
    for term in _flatten(terms, Add):
        if isinstance(term, Num):
            constant += term.value
        else:
            flat.append(term)
    if constant != 0:
        flat.append(Num(constant))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul(*factors: ExprLike) -> Expr:
    """Flattening product; numbers folded into one leading coefficient"""
    flat = []
    coefficient = Fraction(1)
    for factor in _flatten(factors, Mul):
        if isinstance(factor, Num):
            coefficient *= factor.value
        else:
            flat.append(factor)
    if coefficient == 0:
        return ZERO
    if coefficient != 1 or not flat:
        flat.insert(0, Num(coefficient))
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def power(base: ExprLike, exponent: int) -> Expr:
    base = as_expr(base)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Num):
        if base.value == 0 and exponent < 0:
            return Pow(base, exponent)
        return Num(base.value ** exponent)
    if isinstance(base, Pow):
        return power(base.base, base.exp * exponent)
    return Pow(base, exponent)


def neg(e: ExprLike) -> Expr:
    """
    Negation with the shapes the parser produces.

    Num -> Num(-v); Mul with a leading number -> that number negated;
    other Mul -> Num(-1) prepended; anything else -> Mul((Num(-1), e)).
    """
    e = as_expr(e)
    if isinstance(e, Num):
        return Num(-e.value)
    if isinstance(e, Mul):
        head = e.factors[0]
        if isinstance(head, Num):
            return Mul((Num(-head.value),) + e.factors[1:])
        return Mul((MINUS_ONE,) + e.factors)
    return Mul((MINUS_ONE, e))


def sub(a: ExprLike, b: ExprLike) -> Expr:
    return add(a, neg(as_expr(b)))


def div(a: ExprLike, b: ExprLike) -> Expr:
    return mul(a, power(b, -1))


def _flatten(items: Iterable[ExprLike], kind) -> Iterable[Expr]:
    for item in items:
        item = as_expr(item)
        if isinstance(item, kind):
            yield from (getattr(item, "terms" if kind is Add else "factors"))
        else:
            yield item


def children(e: Expr) -> Tuple[Expr, ...]:
    """Direct sub-expressions of a node"""
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, BINDERS):
        return (e.lo, e.hi, e.body)
    if isinstance(e, HarmonicS):
        return (e.arg,)
    if isinstance(e, Binom):
        return (e.top, e.bottom)
    if isinstance(e, (Factorial, SignPow)):
        return (e.arg,)
    if isinstance(e, Pochhammer):
        return (e.base, e.count)
    return ()


def rebuild(e: Expr, new_children: Tuple[Expr, ...]) -> Expr:
    """Same node kind with replaced children (raw, no simplification)"""
    if isinstance(e, Add):
        return Add(tuple(new_children))
    if isinstance(e, Mul):
        return Mul(tuple(new_children))
    if isinstance(e, Pow):
        return Pow(new_children[0], e.exp)
    if isinstance(e, Sum):
        return Sum(e.index, *new_children)
    if isinstance(e, Prod):
        return Prod(e.index, *new_children)
    if isinstance(e, HarmonicS):
        return HarmonicS(e.indices, new_children[0])
    if isinstance(e, Binom):
        return Binom(*new_children)
    if isinstance(e, Factorial):
        return Factorial(new_children[0])
    if isinstance(e, SignPow):
        return SignPow(new_children[0])
    if isinstance(e, Pochhammer):
        return Pochhammer(*new_children)
    return e
