"""
Coefficient domains for a summation problem.

An AlgebraContext fixes the distinguished variable x (the summation or
recurrence index) and the ordered parameter names. All exact arithmetic
happens in the rational function field Q(x, params), realized with sympy's
low-level FracField. Elements free of x form the constant field K = Q(params).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.fields import FracField, FracElement
from sympy.polys.rings import PolyElement

from pisigma.errors import PoleError

Number = Union[int, Fraction]


def qq_to_fraction(q) -> Fraction:
    """Convert a sympy QQ element to a Python Fraction"""
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class AlgebraContext:
    """Container for the fraction field Q(x, params) of one problem"""
    var: str
    params: Tuple[str, ...]
    field: FracField = field(compare=False, hash=False, repr=False)

    @property
    def ring(self):
        return self.field.ring

    @property
    def x(self) -> PolyElement:
        return self.ring.gens[0]

    @property
    def one(self) -> FracElement:
        return self.field.one

    @property
    def zero(self) -> FracElement:
        return self.field.zero

    @property
    def names(self) -> Tuple[str, ...]:
        return (self.var,) + self.params

    def gen(self, name: str) -> FracElement:
        """The field element of the variable or a parameter"""
        if name not in self.names:
            raise KeyError(f"unknown symbol {name!r} in context {self.names}")
        return self.field.gens[self.names.index(name)]

    def poly_gen(self, name: str) -> PolyElement:
        return self.ring.gens[self.names.index(name)]

    def const(self, value: Number) -> FracElement:
        value = Fraction(value)
        return self.field(QQ(value.numerator, value.denominator))

    def frac(self, numer: PolyElement, denom: PolyElement = None) -> FracElement:
        if denom is None:
            return self.field.new(numer)
        if not denom:
            raise PoleError("zero denominator")
        return self.field.new(numer, denom)

    def poly(self, value: Number) -> PolyElement:
        value = Fraction(value)
        return self.ring(QQ(value.numerator, value.denominator))

    # Shift operator on Q(x, params)

    def shift_poly(self, p: PolyElement, j: int) -> PolyElement:
        """p(x + j)"""
        if j == 0 or not p:
            return p
        shifts = [self.ring.domain.convert(j)] + [self.ring.domain.zero] * len(self.params)
        return p.shift_list(shifts)

    def shift(self, f: FracElement, j: int) -> FracElement:
        """f(x + j) for a rational function f"""
        if j == 0 or self.is_constant(f):
            return f
        return self.field.raw_new(self.shift_poly(f.numer, j), self.shift_poly(f.denom, j))

    # Inspection

    def is_constant(self, f: Union[FracElement, PolyElement]) -> bool:
        """True when f does not depend on x (f lies in K)"""
        if isinstance(f, FracElement):
            return self.x_degree(f.numer) <= 0 and self.x_degree(f.denom) <= 0
        return self.x_degree(f) <= 0

    def is_rational_number(self, f: FracElement) -> bool:
        return f.numer.is_ground and f.denom.is_ground

    def to_fraction(self, f: FracElement) -> Fraction:
        """Value of a constant rational number"""
        if not self.is_rational_number(f):
            raise ValueError(f"{f} is not a rational number")
        num = f.numer.LC if f.numer else QQ.zero
        return qq_to_fraction(num) / qq_to_fraction(f.denom.LC)

    @staticmethod
    def x_degree(p: PolyElement) -> int:
        """Degree in x, -1 for the zero polynomial"""
        if not p:
            return -1
        return int(p.degree(0))

    # Substitution

    def substitute_poly(self, p: PolyElement, values: Dict[str, Number]) -> PolyElement:
        pairs = []
        for name, value in values.items():
            value = Fraction(value)
            pairs.append((self.names.index(name), QQ(value.numerator, value.denominator)))
        for index, value in pairs:
            p = p.subs(index, value)
        return p

    def substitute(self, f: FracElement, values: Dict[str, Number]) -> FracElement:
        """Substitute integer or rational values for symbols; a vanishing denominator raises PoleError"""
        numer = self.substitute_poly(f.numer, values)
        denom = self.substitute_poly(f.denom, values)
        if not denom:
            raise PoleError(f"pole of {f.as_expr()} at {values}")
        return self.field.new(numer, denom)

    def at(self, f: FracElement, k: int) -> FracElement:
        """f evaluated at x = k"""
        return self.substitute(f, {self.var: k})

    def shift_to(self, f: FracElement, target: FracElement) -> FracElement:
        """f with x replaced by a constant field element"""
        num_poly = _compose_frac(self, f.numer, target)
        den_poly = _compose_frac(self, f.denom, target)
        if den_poly == 0:
            raise PoleError(f"pole of {f.as_expr()} at x = {target.as_expr()}")
        return num_poly / den_poly


def _compose_frac(ctx: AlgebraContext, p: PolyElement, target: FracElement) -> FracElement:
    """Horner evaluation of p at x = target inside the field"""
    result = ctx.zero
    for degree in range(ctx.x_degree(p), -1, -1):
        result = result * target + ctx.field.new(p.coeff_wrt(0, degree))
    return result


@lru_cache(maxsize=128)
def get_context(var: str, params: Tuple[str, ...] = ()) -> AlgebraContext:
    """Cached context for a variable and parameter tuple"""
    params = tuple(params)
    if var in params:
        raise ValueError(f"variable {var!r} also declared as parameter")
    field_ = FracField((var,) + params, QQ)
    return AlgebraContext(var=var, params=params, field=field_)


def transfer(f: FracElement, target: AlgebraContext) -> FracElement:
    """Move a rational function into another context whose symbols cover its own"""
    return target.field.from_expr(f.as_expr())
