"""
Polynomial difference-field towers.

A Tower is the ordered list of generators adjoined on top of K(x), where
K = Q(params) and sigma(x) = x + 1. Product generators p satisfy
sigma(p) = a * p with a in K(x)*; sum generators s satisfy sigma(s) = s + f
with f in the ring below s. The optional sign generator m (sigma(m) = -m,
m^2 = 1) is a flag on the tower rather than a list entry: it always acts as
the last generator.

Towers are append-only values. Extending one returns a new Tower that shares
the earlier Generator objects, and elements of the old tower lift into it by
zero-padding their exponent vectors.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from sympy.polys.fields import FracElement

from pisigma.algebra.context import AlgebraContext
from pisigma.algebra.shiftclass import ShiftClassRegistry


class GenKind(str, Enum):
    """Kind of a tower generator"""
    PI = "pi"
    SIGMA = "sigma"


# coordinate of a reduced product ratio: ('par', str(poly)), ('cls', index) or ('num', prime)
Coordinate = Tuple[str, Any]
Vector = Tuple[Tuple[Coordinate, int], ...]


@dataclass(frozen=True, eq=False)
class Generator:
    """Container for one generator; compared by identity"""
    name: str
    kind: GenKind
    ratio: Optional[FracElement] = None  # product generators: sigma(p) = ratio * p
    sign: int = 1  # sign of the ratio relative to its reduced form
    vector: Vector = ()  # reduced exponent vector of the ratio
    quotient: Optional[FracElement] = None  # W with ratio = sign * canonical(vector) * sigma(W) / W
    summand: Optional[Any] = None  # sum generators: RingElem f with sigma(s) = s + f

    @property
    def is_pi(self) -> bool:
        return self.kind == GenKind.PI

    @property
    def is_sigma(self) -> bool:
        return self.kind == GenKind.SIGMA

    def __repr__(self) -> str:
        return f"Generator({self.name!r}, {self.kind.value})"


@dataclass(frozen=True, eq=False)
class Tower:
    """Container for a polynomial PiSigma tower over K(x)"""
    ctx: AlgebraContext
    gens: Tuple[Generator, ...] = ()
    has_sign: bool = False
    classes: ShiftClassRegistry = field(default_factory=ShiftClassRegistry)
    cache: Dict[Any, Any] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.gens)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.gens)

    @property
    def pi_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gens) if g.is_pi)

    @property
    def sigma_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gens) if g.is_sigma)

    def index(self, name: str) -> int:
        for i, g in enumerate(self.gens):
            if g.name == name:
                return i
        raise KeyError(f"no generator named {name!r}")

    def position(self, gen: Generator) -> int:
        for i, g in enumerate(self.gens):
            if g is gen:
                return i
        raise KeyError(f"{gen!r} is not part of this tower")

    def with_generator(self, gen: Generator) -> "Tower":
        if gen.name in self.names or gen.name in self.ctx.names:
            raise ValueError(f"generator name {gen.name!r} already in use")
        return replace(self, gens=self.gens + (gen,), cache={})

    def with_sign(self) -> "Tower":
        if self.has_sign:
            return self
        return replace(self, has_sign=True, cache={})

    def with_classes(self, classes: ShiftClassRegistry) -> "Tower":
        if classes is self.classes:
            return self
        return replace(self, classes=classes, cache=self.cache)

    def extends(self, other: "Tower") -> bool:
        """True when other is a prefix of this tower (same generator objects)"""
        if other is self:
            return True
        if other.ctx != self.ctx or len(other.gens) > len(self.gens):
            return False
        if other.has_sign and not self.has_sign:
            return False
        return all(a is b for a, b in zip(other.gens, self.gens))

    def describe(self) -> str:
        parts = [f"{self.ctx.var}"]
        for g in self.gens:
            if g.is_pi:
                parts.append(f"{g.name}: pi {g.ratio.as_expr()}")
            else:
                parts.append(f"{g.name}: sigma")
        if self.has_sign:
            parts.append("m: sign")
        return "; ".join(parts)


def base_tower(ctx: AlgebraContext) -> Tower:
    """The tower K(x) without generators"""
    return Tower(ctx=ctx)
