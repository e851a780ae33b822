"""
Ring elements weighted by opaque constants.

Factors that do not depend on the difference variable but are not rational
in the parameters (n!, (-1)^n, S_1(n), sum(i,0,n,...) inside a sum over k)
are carried as formal multiplicative keys. A Combination maps each key
(a product of opaque atoms with integer exponents) to a RingElem. sigma
acts on the ring parts only; keys are constants.
"""

from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple, Union

from sympy.polys.fields import FracElement

from pisigma.expr.nodes import Expr, ONE, SignPow, mul, power
from pisigma.expr.printer import pretty
from pisigma.field.ring import RingElem, sigma_apply
from pisigma.field.tower import Tower

OpaqueKey = Tuple[Tuple[Expr, int], ...]
UNIT_KEY: OpaqueKey = ()


def make_key(factors: Dict[Expr, int]) -> OpaqueKey:
    """Canonical key: zero exponents dropped, sign atoms reduced mod 2, sorted by text"""
    items = []
    for atom, exp in factors.items():
        if isinstance(atom, SignPow):
            exp %= 2
        if exp:
            items.append((atom, exp))
    return tuple(sorted(items, key=lambda item: pretty(item[0])))


def key_product(a: OpaqueKey, b: OpaqueKey) -> OpaqueKey:
    merged: Dict[Expr, int] = dict(a)
    for atom, exp in b:
        merged[atom] = merged.get(atom, 0) + exp
    return make_key(merged)


def key_inverse(key: OpaqueKey) -> OpaqueKey:
    return make_key({atom: -exp for atom, exp in key})


def key_expr(key: OpaqueKey) -> Expr:
    if not key:
        return ONE
    return mul(*[power(atom, exp) for atom, exp in key])


class Combination:
    """Finite sum of opaque keys times ring elements, with the index it is valid from"""

    __slots__ = ("tower", "parts", "validity")

    def __init__(self, tower: Tower, parts: Optional[Dict[OpaqueKey, RingElem]] = None, validity: int = 0):
        self.tower = tower
        self.parts: Dict[OpaqueKey, RingElem] = {}
        for key, elem in (parts or {}).items():
            elem = elem.lift(tower)
            if elem:
                self.parts[key] = elem
        self.validity = validity

    @classmethod
    def of(cls, elem: RingElem, validity: int = 0) -> "Combination":
        return cls(elem.tower, {UNIT_KEY: elem}, validity)

    @classmethod
    def const(cls, tower: Tower, value: Union[int, Fraction, FracElement], validity: int = 0) -> "Combination":
        return cls(tower, {UNIT_KEY: RingElem.const(tower, value)}, validity)

    @classmethod
    def atom(cls, tower: Tower, atom: Expr, exponent: int = 1) -> "Combination":
        return cls(tower, {make_key({atom: exponent}): RingElem.one(tower)})

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __iter__(self) -> Iterator[Tuple[OpaqueKey, RingElem]]:
        return iter(sorted(self.parts.items(), key=lambda item: [pretty(a) + str(e) for a, e in item[0]]))

    @property
    def keys(self) -> Tuple[OpaqueKey, ...]:
        return tuple(k for k, _ in self)

    def is_ring(self) -> bool:
        return all(k == UNIT_KEY for k in self.parts)

    def ring(self) -> RingElem:
        """The ring element of a key-free combination"""
        if not self.is_ring():
            raise ValueError("combination carries opaque constants")
        return self.parts.get(UNIT_KEY, RingElem.zero(self.tower))

    def part(self, key: OpaqueKey) -> RingElem:
        return self.parts.get(key, RingElem.zero(self.tower))

    def is_constant(self) -> bool:
        return all(e.is_constant() for e in self.parts.values())

    def lift(self, tower: Tower) -> "Combination":
        if tower is self.tower:
            return self
        return Combination(tower, self.parts, self.validity)

    def with_validity(self, validity: int) -> "Combination":
        return Combination(self.tower, self.parts, validity)

    def _common(self, other: "Combination") -> Tuple["Combination", "Combination"]:
        if self.tower is other.tower:
            return self, other
        if self.tower.extends(other.tower):
            return self, other.lift(self.tower)
        if other.tower.extends(self.tower):
            return self.lift(other.tower), other
        raise ValueError("combinations belong to unrelated towers")

    def _coerce(self, other) -> "Combination":
        if isinstance(other, Combination):
            return other
        if isinstance(other, RingElem):
            return Combination.of(other)
        return Combination.const(self.tower, other)

    def __neg__(self) -> "Combination":
        return Combination(self.tower, {k: -e for k, e in self.parts.items()}, self.validity)

    def __add__(self, other) -> "Combination":
        a, b = self._common(self._coerce(other))
        parts = dict(a.parts)
        for key, elem in b.parts.items():
            parts[key] = parts[key] + elem if key in parts else elem
        return Combination(a.tower, parts, max(a.validity, b.validity))

    __radd__ = __add__

    def __sub__(self, other) -> "Combination":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Combination":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Combination":
        a, b = self._common(self._coerce(other))
        parts: Dict[OpaqueKey, RingElem] = {}
        for k1, e1 in a.parts.items():
            for k2, e2 in b.parts.items():
                key = key_product(k1, k2)
                product = e1 * e2
                parts[key] = parts[key] + product if key in parts else product
        return Combination(a.tower, parts, max(a.validity, b.validity))

    __rmul__ = __mul__

    def scale(self, value) -> "Combination":
        return Combination(self.tower, {k: e.scale(value) for k, e in self.parts.items()}, self.validity)

    def is_unit(self) -> bool:
        return len(self.parts) == 1 and next(iter(self.parts.values())).is_unit()

    def inverse(self) -> "Combination":
        if not self.is_unit():
            raise ZeroDivisionError("combination is not invertible")
        (key, elem), = self.parts.items()
        return Combination(self.tower, {key_inverse(key): elem.inverse()}, self.validity)

    def __pow__(self, exponent: int) -> "Combination":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Combination.const(self.tower, 1, self.validity)
        for _ in range(exponent):
            result = result * self
        return result

    def sigma(self, j: int = 1) -> "Combination":
        """sigma^j applied to every ring part"""
        return Combination(
            self.tower, {k: sigma_apply(self.tower, e, j) for k, e in self.parts.items()}, self.validity
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Combination):
            other = self._coerce(other)
        try:
            a, b = self._common(other)
        except ValueError:
            return False
        return a.parts == b.parts

    __hash__ = None

    def __repr__(self) -> str:
        if not self.parts:
            return "0"
        return " + ".join(f"[{pretty(key_expr(k))}]*({e!r})" for k, e in self)
