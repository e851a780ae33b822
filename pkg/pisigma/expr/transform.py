"""
Structural transformations: free symbols, substitution, renaming.

Substitution is capture avoiding: a bound index that would capture a free
symbol of the replacement is renamed first.
"""

from typing import Dict, Iterable, Set

from pisigma.expr.nodes import (
    BINDERS,
    Expr,
    Param,
    Prod,
    Sum,
    Var,
    children,
    rebuild,
)


def free_symbols(e: Expr) -> Set[str]:
    """Names of free Param/Var nodes"""
    if isinstance(e, (Param, Var)):
        return {e.name}
    if isinstance(e, BINDERS):
        inner = free_symbols(e.body) - {e.index}
        return free_symbols(e.lo) | free_symbols(e.hi) | inner
    result: Set[str] = set()
    for child in children(e):
        result |= free_symbols(child)
    return result


def bound_indices(e: Expr) -> Set[str]:
    result: Set[str] = set()
    if isinstance(e, BINDERS):
        result.add(e.index)
    for child in children(e):
        result |= bound_indices(child)
    return result


def all_names(e: Expr) -> Set[str]:
    return free_symbols(e) | bound_indices(e)


def fresh_name(taken: Iterable[str], base: str = "i") -> str:
    taken = set(taken)
    if base not in taken:
        return base
    counter = 1
    while f"{base}{counter}" in taken:
        counter += 1
    return f"{base}{counter}"


def depends_on(e: Expr, name: str) -> bool:
    return name in free_symbols(e)


def substitute(e: Expr, mapping: Dict[str, Expr]) -> Expr:
    """
    Replace free occurrences of symbols (Param or Var) by expressions.

    The result is built with raw constructors; no simplification happens here.
    """
    if not mapping:
        return e
    if isinstance(e, (Param, Var)):
        return mapping.get(e.name, e)
    if isinstance(e, BINDERS):
        lo = substitute(e.lo, mapping)
        hi = substitute(e.hi, mapping)
        inner = {k: v for k, v in mapping.items() if k != e.index}
        index = e.index
        body = e.body
        if inner:
            captured = set()
            for value in inner.values():
                captured |= free_symbols(value)
            if index in captured:
                new_index = fresh_name(captured | all_names(body) | set(inner), index)
                body = substitute(body, {index: Var(new_index)})
                index = new_index
            body = substitute(body, inner)
        kind = Sum if isinstance(e, Sum) else Prod
        return kind(index, lo, hi, body)
    kids = children(e)
    if not kids:
        return e
    return rebuild(e, tuple(substitute(child, mapping) for child in kids))


def count_nodes(e: Expr) -> int:
    return 1 + sum(count_nodes(c) for c in children(e))
