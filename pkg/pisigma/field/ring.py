"""
Elements of the Laurent polynomial ring R over a tower.

R = K(x)[p_1^(+-1), ...][s_1, ...][m] / (m^2 - 1). An element is a map
from (exponent vector, sign bit) to a nonzero rational function in K(x).
Product exponents may be negative, sum exponents are nonnegative and the
sign bit is reduced mod 2, so equal elements have equal term maps.

Supports:
- ring arithmetic, integer powers and inverses of units
- lifting into an extending tower
- the automorphism sigma and its powers (sigma_apply)
- degree and coefficient access per generator
"""

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Optional, Set, Tuple, Union

from sympy.polys.fields import FracElement

from pisigma.field.tower import Tower

Key = Tuple[Tuple[int, ...], int]
Scalar = Union[int, Fraction, FracElement]


class RingElem:
    """Element of the ring R of a tower"""

    __slots__ = ("tower", "terms")

    def __init__(self, tower: Tower, terms: Optional[Dict[Key, FracElement]] = None):
        self.tower = tower
        self.terms: Dict[Key, FracElement] = {k: c for k, c in (terms or {}).items() if c}

    # Constructors

    @classmethod
    def zero(cls, tower: Tower) -> "RingElem":
        return cls(tower)

    @classmethod
    def one(cls, tower: Tower) -> "RingElem":
        return cls.const(tower, tower.ctx.one)

    @classmethod
    def const(cls, tower: Tower, value: Scalar) -> "RingElem":
        """Element of K(x) (no generators)"""
        if not isinstance(value, FracElement):
            value = tower.ctx.const(value)
        return cls(tower, {((0,) * tower.size, 0): value})

    @classmethod
    def x(cls, tower: Tower) -> "RingElem":
        return cls.const(tower, tower.ctx.gen(tower.ctx.var))

    @classmethod
    def gen(cls, tower: Tower, index: int, exponent: int = 1) -> "RingElem":
        exps = [0] * tower.size
        exps[index] = exponent
        return cls(tower, {(tuple(exps), 0): tower.ctx.one})

    @classmethod
    def sign(cls, tower: Tower) -> "RingElem":
        if not tower.has_sign:
            raise ValueError("tower has no sign generator")
        return cls(tower, {((0,) * tower.size, 1): tower.ctx.one})

    @classmethod
    def monomial(cls, tower: Tower, key: Key, coeff: Optional[FracElement] = None) -> "RingElem":
        return cls(tower, {key: tower.ctx.one if coeff is None else coeff})

    # Inspection

    @property
    def ctx(self):
        return self.tower.ctx

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[Tuple[Key, FracElement]]:
        return iter(sorted(self.terms.items(), key=lambda item: item[0], reverse=True))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def zero_key(self) -> Key:
        return (0,) * self.tower.size, 0

    def is_rational(self) -> bool:
        """True for elements of K(x)"""
        return all(k == self.zero_key for k in self.terms)

    def is_constant(self) -> bool:
        """True for elements of K"""
        return self.is_rational() and all(self.ctx.is_constant(c) for c in self.terms.values())

    def rational(self) -> FracElement:
        """The K(x) value of a rational element"""
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.terms.get(self.zero_key, self.ctx.zero)

    def degree(self, index: int) -> int:
        """Degree in generator `index`, -1 for zero"""
        return max((k[0][index] for k in self.terms), default=-1)

    def min_degree(self, index: int) -> int:
        return min((k[0][index] for k in self.terms), default=0)

    def coeff(self, index: int, degree: int) -> "RingElem":
        """Coefficient of gen^degree, as an element without that generator"""
        result = {}
        for (exps, s), c in self.terms.items():
            if exps[index] == degree:
                reduced = exps[:index] + (0,) + exps[index + 1:]
                result[(reduced, s)] = c
        return RingElem(self.tower, result)

    def support(self) -> Set[int]:
        """Indices of the generators that occur"""
        used: Set[int] = set()
        for exps, _ in self.terms:
            used.update(i for i, e in enumerate(exps) if e)
        return used

    def uses_sign(self) -> bool:
        return any(s for _, s in self.terms)

    def sigma_degree(self) -> int:
        """Total degree in the sum generators"""
        sigma = self.tower.sigma_indices
        return max((sum(exps[i] for i in sigma) for exps, _ in self.terms), default=-1)

    def pi_part(self, key: Key) -> Key:
        """The key with sum exponents removed"""
        exps, s = key
        return tuple(0 if self.tower.gens[i].is_sigma else e for i, e in enumerate(exps)), s

    def split_pi(self) -> Dict[Key, "RingElem"]:
        """Group by product-and-sign monomial: {pi key: polynomial in the sum generators}"""
        groups: Dict[Key, Dict[Key, FracElement]] = {}
        for key, c in self.terms.items():
            pk = self.pi_part(key)
            exps, _ = key
            sigma_only = tuple(e if self.tower.gens[i].is_sigma else 0 for i, e in enumerate(exps))
            groups.setdefault(pk, {})[(sigma_only, 0)] = c
        return {pk: RingElem(self.tower, terms) for pk, terms in groups.items()}

    def coefficients(self) -> Iterable[FracElement]:
        return self.terms.values()

    # Tower changes

    def lift(self, tower: Tower) -> "RingElem":
        """The same element inside an extending tower"""
        if tower is self.tower:
            return self
        if not tower.extends(self.tower):
            raise ValueError("target tower does not extend the element's tower")
        pad = (0,) * (tower.size - self.tower.size)
        return RingElem(tower, {(exps + pad, s): c for (exps, s), c in self.terms.items()})

    def _common(self, other: "RingElem") -> Tuple["RingElem", "RingElem"]:
        if self.tower is other.tower:
            return self, other
        if self.tower.extends(other.tower):
            return self, other.lift(self.tower)
        if other.tower.extends(self.tower):
            return self.lift(other.tower), other
        raise ValueError("elements belong to unrelated towers")

    def _coerce(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            return other
        return RingElem.const(self.tower, other)

    # Arithmetic

    def __neg__(self) -> "RingElem":
        return RingElem(self.tower, {k: -c for k, c in self.terms.items()})

    def __add__(self, other) -> "RingElem":
        a, b = self._common(self._coerce(other))
        result = dict(a.terms)
        for k, c in b.terms.items():
            result[k] = result[k] + c if k in result else c
        return RingElem(a.tower, result)

    __radd__ = __add__

    def __sub__(self, other) -> "RingElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RingElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RingElem":
        if not isinstance(other, RingElem):
            return self.scale(other)
        a, b = self._common(other)
        result: Dict[Key, FracElement] = {}
        for (e1, s1), c1 in a.terms.items():
            for (e2, s2), c2 in b.terms.items():
                key = (tuple(i + j for i, j in zip(e1, e2)), (s1 + s2) % 2)
                product = c1 * c2
                result[key] = result[key] + product if key in result else product
        return RingElem(a.tower, result)

    __rmul__ = __mul__

    def scale(self, value: Scalar) -> "RingElem":
        if not isinstance(value, FracElement):
            value = self.ctx.const(value)
        if not value:
            return RingElem(self.tower)
        return RingElem(self.tower, {k: c * value for k, c in self.terms.items()})

    def is_unit(self) -> bool:
        if len(self.terms) != 1:
            return False
        (exps, _), = self.terms
        return all(exps[i] == 0 for i in self.tower.sigma_indices)

    def inverse(self) -> "RingElem":
        """Inverse of a unit c * p^e * m^s"""
        if not self.is_unit():
            raise ZeroDivisionError("element is not a unit of the Laurent ring")
        ((exps, s), c), = self.terms.items()
        return RingElem(self.tower, {(tuple(-e for e in exps), s): 1 / c})

    def __truediv__(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            return self * other.inverse()
        if not isinstance(other, FracElement):
            other = self.ctx.const(other)
        return self.scale(1 / other)

    def __pow__(self, exponent: int) -> "RingElem":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = RingElem.one(self.tower)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def map_coefficients(self, fn) -> "RingElem":
        return RingElem(self.tower, {k: fn(c) for k, c in self.terms.items()})

    # Comparison

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElem):
            if isinstance(other, (int, Fraction, FracElement)):
                other = self._coerce(other)
            else:
                return NotImplemented
        try:
            a, b = self._common(other)
        except ValueError:
            return False
        return a.terms == b.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.values()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (exps, s), c in self:
            factors = [f"({c.as_expr()})"]
            for g, e in zip(self.tower.gens, exps):
                if e:
                    factors.append(g.name if e == 1 else f"{g.name}^{e}")
            if s:
                factors.append("m")
            parts.append("*".join(factors))
        return " + ".join(parts)


# The automorphism sigma


def _pi_factor(tower: Tower, exps: Tuple[int, ...], direction: int) -> FracElement:
    """Scalar picked up by the product part of a monomial under sigma^direction"""
    ctx = tower.ctx
    result = ctx.one
    for i in tower.pi_indices:
        e = exps[i]
        if not e:
            continue
        ratio = tower.gens[i].ratio
        if direction > 0:
            result = result * ratio ** e
        else:
            result = result * ctx.shift(ratio, -1) ** (-e)
    return result


def _sigma_power(tower: Tower, index: int, direction: int, power: int) -> RingElem:
    """(sigma^direction(s))^power for the sum generator at index, cached on the tower"""
    key = ("sigma", index, direction, power)
    cached = tower.cache.get(key)
    if cached is not None:
        return cached
    if power == 1:
        summand = tower.gens[index].summand.lift(tower)
        if direction > 0:
            image = RingElem.gen(tower, index) + summand
        else:
            image = RingElem.gen(tower, index) - sigma_once(summand, -1)
    else:
        image = _sigma_power(tower, index, direction, power - 1) * _sigma_power(tower, index, direction, 1)
    tower.cache[key] = image
    return image


def sigma_once(e: RingElem, direction: int = 1) -> RingElem:
    """sigma(e) for direction 1, the inverse automorphism for direction -1"""
    tower = e.tower
    ctx = tower.ctx
    sigma = tower.sigma_indices
    result = RingElem(tower)
    for (exps, s), c in e.terms.items():
        coeff = ctx.shift(c, direction) * _pi_factor(tower, exps, direction)
        if s:
            coeff = -coeff
        pi_exps = tuple(0 if i in sigma else v for i, v in enumerate(exps))
        term = RingElem(tower, {(pi_exps, s): coeff})
        for i in sigma:
            if exps[i]:
                term = term * _sigma_power(tower, i, direction, exps[i])
        result = result + term
    return result


def sigma_apply(tower: Tower, e: RingElem, j: int) -> RingElem:
    """
    sigma^j(e) for any integer j.

    Args:
        tower: Tower the result lives in (must extend e's tower)
        e: Ring element
        j: Shift; negative values apply the inverse automorphism

    Returns:
        The shifted element, again in R
    """
    result = e.lift(tower)
    direction = 1 if j > 0 else -1
    for _ in range(abs(j)):
        result = sigma_once(result, direction)
    return result


def monomial_shift_factor(tower: Tower, key: Key) -> FracElement:
    """The scalar u in K(x) with sigma(M) = u * M for a product-and-sign monomial M"""
    exps, s = key
    factor = _pi_factor(tower, exps, 1)
    return -factor if s else factor
