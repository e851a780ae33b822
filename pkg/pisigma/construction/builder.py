"""
Translation of nested sum-product expressions into a tower.

A TowerBuilder owns a growing tower with its evaluation data and turns
expressions in the tower variable into Combinations: rational parts become
elements of K(x), atoms become product generators anchored at a start
point, and sums are built bottom-up by indefinite summation, one sum
generator per summand that does not telescope. Every result carries the
index from which its values agree with the input expression.

Supports:
- sums with concrete lower bound and upper bound var + offset (the
  offset may involve parameters)
- harmonic sums through their defining nested sums
- binomials, factorials, Pochhammer symbols, sign powers and products
  with rational body
- variable-free subexpressions as opaque constants
"""

from typing import Dict, Optional

from pisigma.algebra.context import AlgebraContext
from pisigma.construction.atoms import anchor_start, shift_ratio
from pisigma.construction.constants import ConstantTranslator
from pisigma.errors import EvaluationError, PoleError, UnsupportedError
from pisigma.evaluation.ev import beta, ev
from pisigma.evaluation.spec import EvalSpec, GenSpec
from pisigma.expr.linear import integer_linear_form
from pisigma.expr.nodes import (
    Add,
    Binom,
    Expr,
    Factorial,
    HarmonicS,
    Infinity,
    Mul,
    Param,
    Pochhammer,
    Pow,
    Prod,
    SignPow,
    Sum,
    Var,
    add,
    mul,
    num,
    power,
)
from pisigma.expr.printer import pretty
from pisigma.expr.transform import all_names, depends_on, fresh_name, substitute
from pisigma.field.combination import UNIT_KEY, Combination, key_expr
from pisigma.field.extensions import represent_products
from pisigma.field.ring import RingElem
from pisigma.field.tower import Tower, base_tower
from pisigma.logging_config import get_logger
from pisigma.solvers.telescope import indefinite_sum

logger = get_logger(__name__)

ANCHOR_ATTEMPTS = 8


class TowerBuilder:
    """
    Incremental translator of expressions in one variable.

    Attributes:
        ctx: Context of the variable and parameters
        tower: Current tower; every translation may extend it
        spec: Evaluation data of the current tower
        atomic: Atomic reduction in indefinite sums (None: from settings)
    """

    def __init__(
        self,
        ctx: AlgebraContext,
        tower: Optional[Tower] = None,
        spec: Optional[EvalSpec] = None,
        atomic: Optional[bool] = None,
    ):
        self.ctx = ctx
        self.tower = tower or base_tower(ctx)
        self.spec = spec or EvalSpec()
        self.atomic = atomic
        self.constants = ConstantTranslator(ctx)
        self._atoms: Dict[Expr, Combination] = {}

    @property
    def variable(self) -> Param:
        return Param(self.ctx.var)

    def translate(self, e: Expr) -> Combination:
        """
        Combination with the values of e from its validity index on.

        Raises:
            UnsupportedError: e is outside the supported expression class
            ValidationError: e uses undeclared symbols
        """
        return self._translate(e).lift(self.tower)

    def constant(self, e: Expr) -> Combination:
        """Variable-free expression as a constant combination in the current tower"""
        return self.constants.translate(e).lift(self.tower)

    def _translate(self, e: Expr) -> Combination:
        var = self.ctx.var
        if not depends_on(e, var):
            return self.constant(e)
        if isinstance(e, (Param, Var)):
            return Combination.of(RingElem.x(self.tower))
        if isinstance(e, Add):
            result = Combination(self.tower)
            for term in e.terms:
                result = result + self._translate(term)
            return result
        if isinstance(e, Mul):
            result = Combination.const(self.tower, 1)
            for factor in e.factors:
                result = result * self._translate(factor)
            return result
        if isinstance(e, Pow):
            base = self._translate(e.base)
            if e.exp < 0 and not base.is_unit():
                raise UnsupportedError(f"denominator {pretty(e.base)} is not a hypergeometric term")
            return base ** e.exp
        if isinstance(e, Sum):
            return self._sum(e, hint=True)
        if isinstance(e, HarmonicS):
            return self._sum(self._harmonic_sum(e), hint=False)
        if isinstance(e, Binom) and not depends_on(e.bottom, var):
            bottom = integer_linear_form(e.bottom)
            if bottom.is_constant():
                return self._falling(e.top, int(bottom.const))
        if isinstance(e, Pochhammer) and not depends_on(e.count, var):
            count = integer_linear_form(e.count)
            if count.is_constant() and count.const >= 0:
                return self._rising(e.base, int(count.const))
        if isinstance(e, (Binom, Factorial, Pochhammer, SignPow, Prod)):
            return self.atom(e)
        if isinstance(e, Infinity):
            raise UnsupportedError("infinite bound inside a summand")
        raise UnsupportedError(f"cannot translate {type(e).__name__}")

    def _harmonic_sum(self, e: HarmonicS) -> Sum:
        """S_{m, rest}(arg) as sum_{i=1}^{arg} sign(m)^i / i^|m| * S_rest(i), the inner sum kept as HarmonicS"""
        index = fresh_name(all_names(e) | set(self.ctx.names), "i")
        i = Var(index)
        first, rest = e.indices[0], e.indices[1:]
        body = power(i, -abs(first))
        if first < 0:
            body = mul(SignPow(i), body)
        if rest:
            body = mul(body, HarmonicS(rest, i))
        return Sum(index, num(1), e.arg, body)

    def _falling(self, top: Expr, count: int) -> Combination:
        if count < 0:
            return Combination(self.tower)
        base = self._translate(top)
        result = Combination.const(self.tower, 1)
        for j in range(count):
            result = result * (base - j)
        scale = 1
        for j in range(2, count + 1):
            scale *= j
        return result.scale(self.ctx.const(1) / scale)

    def _rising(self, base: Expr, count: int) -> Combination:
        value = self._translate(base)
        result = Combination.const(self.tower, 1)
        for j in range(count):
            result = result * (value + j)
        return result

    # Atoms

    def atom(self, e: Expr) -> Combination:
        """
        A hypergeometric atom as anchor * g / ev(g, x0) with sigma(g) = ratio * g.

        The start point x0 lies past the integer zeros and poles of the
        ratio; it moves up while the atom or g vanishes or is undefined there.
        """
        cached = self._atoms.get(e)
        if cached is not None:
            return cached.lift(self.tower)
        ctx = self.ctx
        ratio = shift_ratio(ctx, e)
        tower, (rep,), new_indices = represent_products(self.tower, [ratio])
        g = rep.element
        if rep.flag < 0:
            g = g * RingElem.sign(tower)
        fresh = bool(new_indices) and rep.element == RingElem.gen(tower, new_indices[0])
        start = anchor_start(ratio)
        if not fresh:
            start = max(start, beta(tower, self.spec, g))
        for x0 in range(start, start + ANCHOR_ATTEMPTS):
            try:
                anchor = self.constants.translate(substitute(e, {ctx.var: num(x0)})).lift(tower)
            except (PoleError, EvaluationError):
                continue
            if not anchor:
                continue
            if fresh:
                result = self._fresh_atom(tower, e, rep.flag, new_indices[0], x0, anchor)
            else:
                try:
                    value = ev(tower, self.spec, g, x0)
                except PoleError:
                    continue
                if not value:
                    continue
                self.tower = tower
                result = (anchor * Combination.of(g)).scale(1 / value).with_validity(x0)
            logger.debug(f"Atom {pretty(e)} anchored at {x0}")
            self._atoms[e] = result
            return result
        raise UnsupportedError(f"no start point found for {pretty(e)}")

    def _fresh_atom(self, tower: Tower, e: Expr, flag: int, index: int, x0: int, anchor: Combination) -> Combination:
        """Evaluation data of a newly adjoined product generator so that it displays as the atom"""
        ctx = self.ctx
        gen = tower.gens[index]
        g = RingElem.gen(tower, index)
        display = e
        if flag < 0:
            g = g * RingElem.sign(tower)
            display = mul(e, SignPow(self.variable))
        sign = -1 if flag < 0 and x0 % 2 else 1
        keys = anchor.keys
        if len(keys) == 1 and anchor.parts[keys[0]].is_constant():
            key = keys[0]
            value = anchor.parts[key].rational() * sign
            if key != UNIT_KEY:
                display = mul(display, key_expr(key) ** -1)
            self.spec = self.spec.with_entry(gen, GenSpec(x0 + 1, value, display))
            self.tower = tower
            return Combination(tower, {key: g}, x0)
        self.spec = self.spec.with_entry(gen, GenSpec(x0 + 1, ctx.one))
        self.tower = tower
        value = ev(tower, self.spec, g, x0)
        return (anchor * Combination.of(g)).scale(1 / value).with_validity(x0)

    # Sums

    def _sum(self, e: Sum, hint: bool) -> Combination:
        """
        sum_{i=lo}^{var+offset} body(i) for a concrete lo.

        A parameter part P of the offset splits off the constant
        sum_{i=lo}^{P+c} body(i); the rest is sigma^c of S(k) =
        sum_{i=lo}^{k} body(i), built from an antidifference of
        sigma(body(k)) per opaque key and fixed by its value at one point.
        """
        ctx = self.ctx
        var = ctx.var
        if isinstance(e.hi, Infinity):
            raise UnsupportedError("infinite sums are only supported as definite sums")
        lo = integer_linear_form(e.lo)
        if not lo.is_constant():
            raise UnsupportedError("lower summation bound must be a concrete integer")
        hi = integer_linear_form(e.hi)
        if hi.coefficient(var) != 1:
            raise UnsupportedError("upper summation bound must be the variable plus an offset")
        if depends_on(e.body, var):
            raise UnsupportedError("summand depends on the outer variable; treat it as a definite sum")
        rest = hi.without(var)
        if not rest.is_constant():
            offset = rest.to_expr()
            head = Sum(e.index, e.lo, offset, e.body)
            index = fresh_name(all_names(e.body) | set(ctx.names), "j")
            tail = Sum(index, num(1), self.variable, substitute(e.body, {e.index: add(offset, Var(index))}))
            return self.constant(head) + self._sum(tail, hint)
        shift = int(rest.const)
        start = int(lo.const)
        body = substitute(e.body, {e.index: self.variable})
        summand = self._translate(body)
        shifted = summand.sigma(1)
        parts = {}
        for key, part in shifted:
            display = body if hint and key == UNIT_KEY and len(shifted.parts) == 1 else None
            result = indefinite_sum(self.tower, self.spec, part, lower=start, display_body=display, atomic=self.atomic)
            self.tower, self.spec = result.tower, result.spec
            parts[key] = result.g
        antidifference = Combination(self.tower, parts)
        summand = summand.lift(self.tower)
        point = max(
            start,
            summand.validity,
            beta(self.tower, self.spec, antidifference),
            beta(self.tower, self.spec, summand),
            beta(self.tower, self.spec, shifted.lift(self.tower)),
        )
        initial = self.constant(Sum(e.index, e.lo, num(point), e.body))
        for key, part in antidifference.parts.items():
            value = ev(self.tower, self.spec, part, point)
            if value:
                initial = initial - Combination(self.tower, {key: RingElem.const(self.tower, value)})
        total = antidifference + initial
        validity = point + max(0, -shift)
        logger.debug(f"Sum over {e.index} translated, valid from {validity}")
        return total.sigma(shift).with_validity(validity)
