"""
Recursive-descent parser for the plain expression grammar.

Supports:
- integer literals, rationals "2/3" at the start of a term, identifiers and
  parenthesized expressions
- sum(i,lo,hi,body) and prod(i,lo,hi,body) with scoped indices
- binom, factorial (also postfix "!"), pochhammer, S[m1,...,mk,arg]
- (-1)^expr as the sign atom, integer powers "^3" and "^(-3)"
- "infinity" as a sum upper bound
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional, Set

from pisigma.errors import ParseError, ValidationError
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
    children,
    neg,
)

KEYWORDS = {"sum", "prod", "binom", "factorial", "pochhammer", "infinity"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),\[\]!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    """Container for one lexical token"""
    kind: str  # int, ident, op, end
    text: str
    offset: int  # byte offset in the UTF-8 input


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group(), _byte_offset(text, pos)))
        pos = match.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class Parser:
    """Parser over a token list; identifiers bound by sum/prod become Var nodes"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.scope: List[str] = []

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, ahead: int = 1) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.current.kind in ("op", "ident") and self.current.text == text

    def advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}", [text])
        return self.advance()

    def fail(self, message: str, expected: Iterable[str] = ()):
        found = self.current.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", self.current.offset, expected)

    # Grammar

    def parse(self, allow_infinity: bool = False) -> Expr:
        result = self.expr()
        if self.current.kind != "end":
            self.fail("unexpected trailing input", ["+", "-", "*", "/", "end of input"])
        if _misplaced_infinity(result) and not allow_infinity:
            raise ParseError("infinity is only allowed as a sum upper bound", 0)
        return result

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.at("+") or self.at("-"):
            op = self.advance().text
            term = self.term()
            terms.append(term if op == "+" else neg(term))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self) -> Expr:
        literal = self.leading_rational()
        factors = [literal if literal is not None else self.factor()]
        while self.at("*") or self.at("/"):
            op = self.advance().text
            factor = self.factor()
            factors.append(factor if op == "*" else Pow(factor, -1))
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def leading_rational(self) -> Optional[Num]:
        """
        A term that starts with ["-"...] INT "/" INT reads the quotient as one number.

        The fold is skipped when the denominator carries "^" or "!", so that
        1/2^3 stays 1/(2^3) and n/2/3 stays left-associative.
        """
        ahead = 0
        while self.peek(ahead).kind == "op" and self.peek(ahead).text == "-":
            ahead += 1
        numerator, slash, denominator, after = (self.peek(ahead + i) for i in range(4))
        if numerator.kind != "int" or slash.text != "/" or denominator.kind != "int":
            return None
        if after.kind == "op" and after.text in ("^", "!"):
            return None
        if int(denominator.text) == 0:
            raise ParseError("zero denominator in rational literal", denominator.offset)
        self.pos += ahead + 3
        value = Fraction(int(numerator.text), int(denominator.text))
        return Num(-value if ahead % 2 else value)

    def factor(self) -> Expr:
        if self.at("-"):
            self.advance()
            return neg(self.factor())
        base = self.postfix()
        if self.at("^"):
            caret = self.advance()
            exponent = self.integer_exponent()
            if exponent is not None:
                return Pow(base, exponent)
            if isinstance(base, Num) and base.value == -1:
                return SignPow(self.atom())
            raise ParseError("exponent must be an integer", caret.offset, ["integer"])
        return base

    def integer_exponent(self) -> Optional[int]:
        """INT or ( -INT ) or ( INT ); None when the exponent is not an integer literal"""
        if self.current.kind == "int":
            return int(self.advance().text)
        if self.at("(") and self.peek().kind == "int" and self.peek(2).text == ")":
            self.advance()
            value = int(self.advance().text)
            self.advance()
            return value
        if self.at("(") and self.peek().text == "-" and self.peek(2).kind == "int" and self.peek(3).text == ")":
            self.advance()
            self.advance()
            value = -int(self.advance().text)
            self.advance()
            return value
        return None

    def postfix(self) -> Expr:
        result = self.atom()
        while self.at("!"):
            self.advance()
            result = Factorial(result)
        return result

    def atom(self) -> Expr:
        token = self.current
        if token.kind == "int":
            self.advance()
            return Num(Fraction(int(token.text)))
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind == "ident":
            return self.identifier()
        self.fail("expected an expression", ["number", "identifier", "("])

    def identifier(self) -> Expr:
        token = self.advance()
        name = token.text
        if name == "S" and self.at("["):
            return self.harmonic()
        if name in ("sum", "prod") and self.at("("):
            return self.binder(Sum if name == "sum" else Prod)
        if name == "binom" and self.at("("):
            top, bottom = self.arguments(2)
            return Binom(top, bottom)
        if name == "factorial" and self.at("("):
            (arg,) = self.arguments(1)
            return Factorial(arg)
        if name == "pochhammer" and self.at("("):
            base, count = self.arguments(2)
            return Pochhammer(base, count)
        if name == "infinity":
            return Infinity()
        if name in KEYWORDS:
            raise ParseError(f"keyword {name!r} needs an argument list", token.offset, ["("])
        if name in self.scope:
            return Var(name)
        return Param(name)

    def arguments(self, count: int) -> List[Expr]:
        self.expect("(")
        args = [self.expr()]
        for _ in range(count - 1):
            self.expect(",")
            args.append(self.expr())
        self.expect(")")
        return args

    def binder(self, kind) -> Expr:
        self.expect("(")
        index_token = self.current
        if index_token.kind != "ident" or index_token.text in KEYWORDS:
            self.fail("expected an index name", ["identifier"])
        self.advance()
        self.expect(",")
        lo = self.expr()
        self.expect(",")
        hi = self.expr()
        self.expect(",")
        self.scope.append(index_token.text)
        try:
            body = self.expr()
        finally:
            self.scope.pop()
        self.expect(")")
        if contains_infinity(lo) or (contains_infinity(hi) and not (isinstance(hi, Infinity) and kind is Sum)):
            raise ParseError("infinity is only allowed as a sum upper bound", index_token.offset)
        return kind(index_token.text, lo, hi, body)

    def harmonic(self) -> Expr:
        self.expect("[")
        indices = []
        while True:
            sign = 1
            if self.at("-"):
                self.advance()
                sign = -1
            if self.current.kind == "int" and self.peek().text == ",":
                value = sign * int(self.advance().text)
                if value == 0:
                    raise ParseError("harmonic sum indices must be nonzero", self.current.offset)
                indices.append(value)
                self.expect(",")
                continue
            if sign == -1:
                self.pos -= 1
            break
        if not indices:
            self.fail("expected at least one harmonic sum index", ["integer"])
        arg = self.expr()
        self.expect("]")
        return HarmonicS(tuple(indices), arg)


def contains_infinity(e: Expr) -> bool:
    if isinstance(e, Infinity):
        return True
    return any(contains_infinity(c) for c in children(e))


def _misplaced_infinity(e: Expr) -> bool:
    """True when infinity occurs anywhere but as a sum upper bound"""
    if isinstance(e, Infinity):
        return True
    if isinstance(e, Sum):
        hi_ok = isinstance(e.hi, Infinity) or not _misplaced_infinity(e.hi)
        return _misplaced_infinity(e.lo) or not hi_ok or _misplaced_infinity(e.body)
    return any(_misplaced_infinity(c) for c in children(e))


def parse(text: str, params: Optional[Iterable[str]] = None) -> Expr:
    """
    Parse an expression.

    Args:
        text: Expression in the plain grammar
        params: Declared parameter and variable names. When given, every free
            identifier must be one of them.

    Returns:
        Expression tree

    Raises:
        ParseError: on grammar violations (with byte offset and expected tokens)
        ValidationError: on undeclared free identifiers
    """
    result = Parser(text).parse(allow_infinity=False)
    if params is not None:
        check_scope(result, frozenset(params))
    return result


def check_scope(e: Expr, allowed: FrozenSet[str]) -> None:
    """Every free symbol must be declared; bound indices may not shadow declared names"""
    from pisigma.expr.transform import free_symbols, bound_indices
    undeclared: Set[str] = free_symbols(e) - set(allowed)
    if undeclared:
        raise ValidationError(f"undeclared symbols: {', '.join(sorted(undeclared))}")
    shadowed = bound_indices(e) & set(allowed)
    if shadowed:
        raise ValidationError(f"summation indices shadow declared names: {', '.join(sorted(shadowed))}")
