"""Recurrences: creative telescoping, Hyper, d'Alembertian solving and fitting to initial values"""

from pisigma.recurrences.model import Certificate, RecSolutionSet, Recurrence, safe_value, shift_expr
from pisigma.recurrences.creative import (
    Telescoper,
    certificate_holds,
    certificate_symbolic,
    creative_telescope,
    generate_recurrence,
    joint_telescopers,
    recurrence_holds,
)
from pisigma.recurrences.hyper import HyperSolution, hyper_solutions
from pisigma.recurrences.solve import apply_operator, check_solution, right_divide, solve_recurrence
from pisigma.recurrences.combine import FittedSolution, find_linear_combination

__all__ = [
    "Certificate",
    "RecSolutionSet",
    "Recurrence",
    "safe_value",
    "shift_expr",
    "Telescoper",
    "certificate_holds",
    "certificate_symbolic",
    "creative_telescope",
    "generate_recurrence",
    "joint_telescopers",
    "recurrence_holds",
    "HyperSolution",
    "hyper_solutions",
    "apply_operator",
    "check_solution",
    "right_divide",
    "solve_recurrence",
    "FittedSolution",
    "find_linear_combination",
]
