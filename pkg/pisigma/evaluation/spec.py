"""Evaluation data attached to a tower: lower bounds, constants and display templates"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from sympy.polys.fields import FracElement

from pisigma.expr.nodes import Expr
from pisigma.field.tower import Generator


@dataclass(frozen=True)
class GenSpec:
    """
    Container for the evaluation data of one generator.

    Product generators evaluate to const * prod_{i=lower}^{k} a(i-1), sum
    generators to const + sum_{i=lower}^{k} ev(f, i-1). The display, when
    set, is an expression in the tower variable with the same values from
    lower - 1 on.
    """
    lower: int
    const: FracElement
    display: Optional[Expr] = None


@dataclass(frozen=True, eq=False)
class EvalSpec:
    """Container for the per-generator evaluation data of one tower, with value caches"""
    entries: Dict[Generator, GenSpec] = field(default_factory=dict)
    defaults: Dict[Generator, GenSpec] = field(default_factory=dict, repr=False)
    values: Dict[Any, Any] = field(default_factory=dict, repr=False)

    def explicit(self, gen: Generator) -> Optional[GenSpec]:
        return self.entries.get(gen)

    def with_entry(self, gen: Generator, spec: GenSpec) -> "EvalSpec":
        entries = dict(self.entries)
        entries[gen] = spec
        if gen in self.defaults or gen in self.values:
            return EvalSpec(entries=entries)
        return EvalSpec(entries=entries, defaults=dict(self.defaults), values=dict(self.values))

    def with_display(self, gen: Generator, display: Expr, default: GenSpec) -> "EvalSpec":
        current = self.entries.get(gen, default)
        return self.with_entry(gen, GenSpec(current.lower, current.const, display))
