"""Difference-equation solvers over a tower: first-order parameterized equations, telescoping, Hyper, d'Alembertian solutions"""

from pisigma.solvers.polysol import constant_kernel, degree_bound, polynomial_solutions, universal_denominator
from pisigma.solvers.fplde import FpldeSolution, denominator_bound, solve_fplde, sum_degree_bound
from pisigma.solvers.telescope import (
    IndefiniteSum,
    SummandReduction,
    candidate_atoms,
    check_sigma_extension,
    indefinite_sum,
    reduce_summand,
    telescope,
)
from pisigma.solvers.hyper import hyper_ratios
from pisigma.solvers.plde import DAlembertSolution, right_divide, solve_plde

__all__ = [
    "constant_kernel",
    "degree_bound",
    "polynomial_solutions",
    "universal_denominator",
    "FpldeSolution",
    "denominator_bound",
    "solve_fplde",
    "sum_degree_bound",
    "IndefiniteSum",
    "SummandReduction",
    "candidate_atoms",
    "check_sigma_extension",
    "indefinite_sum",
    "reduce_summand",
    "telescope",
    "hyper_ratios",
    "DAlembertSolution",
    "right_divide",
    "solve_plde",
]
