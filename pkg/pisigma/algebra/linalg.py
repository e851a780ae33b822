"""Exact linear algebra over the constant field K, built on sympy DomainMatrix"""

from typing import List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from pisigma.algebra.context import AlgebraContext


def constant_domain(ctx: AlgebraContext):
    """Domain whose elements are the FracElements of the context field"""
    return ctx.field.to_domain()


def _matrix(rows: Sequence[Sequence], ncols: int, domain) -> DomainMatrix:
    return DomainMatrix([list(r) for r in rows], (len(rows), ncols), domain)


def rref(rows: Sequence[Sequence], ncols: int, domain) -> Tuple[List[List], Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns; zero rows are dropped"""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = _matrix(rows, ncols, domain).rref(method="GJ")
    return reduced.to_list()[:len(pivots)], tuple(pivots)


def nullspace(rows: Sequence[Sequence], ncols: int, domain) -> List[List]:
    """
    Basis of {v : A v = 0}.

    Args:
        rows: Matrix rows (entries in domain)
        ncols: Number of columns (needed when rows is empty)
        domain: sympy domain of the entries

    Returns:
        List of basis vectors, each of length ncols
    """
    if ncols == 0:
        return []
    if not rows:
        return [[domain.one if i == j else domain.zero for j in range(ncols)] for i in range(ncols)]
    reduced, pivots = _matrix(rows, ncols, domain).rref(method="GJ")
    null = reduced.nullspace_from_rref(pivots)
    return null.to_list()


def solve_linear(rows: Sequence[Sequence], rhs: Sequence, ncols: int, domain) -> Optional[List]:
    """One solution of A v = b, or None when inconsistent"""
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not augmented:
        return [domain.zero] * ncols
    reduced, pivots = rref(augmented, ncols + 1, domain)
    if ncols in pivots:
        return None
    solution = [domain.zero] * ncols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[ncols]
    return solution


def rref_with_transform(rows: Sequence[Sequence], ncols: int, domain) -> List[Tuple[List, List, int]]:
    """
    Row-reduce A and record the row operations.

    Returns:
        For every nonzero row of rref(A): (reduced row, transform row T_r, pivot)
        with reduced row = sum_j T_r[j] * rows[j]
    """
    m = len(rows)
    if m == 0 or ncols == 0:
        return []
    augmented = []
    for i, row in enumerate(rows):
        augmented.append(list(row) + [domain.one if i == j else domain.zero for j in range(m)])
    reduced, pivots = rref(augmented, ncols + m, domain)
    result = []
    for row, pivot in zip(reduced, pivots):
        if pivot >= ncols:
            break
        result.append((row[:ncols], row[ncols:], pivot))
    return result
