"""User-facing algorithms: reduction to independent sums and definite multi-sum evaluation"""

from pisigma.pipeline.reduce import (
    DefiniteSumEliminator,
    ReduceResult,
    partial_fraction_reduce,
    sigma_generators_independent,
    sigma_reduce,
)
from pisigma.pipeline.multisum import EmsJob, EmsResult, MultiSumEvaluator, evaluate_multisum

__all__ = [
    "DefiniteSumEliminator",
    "ReduceResult",
    "partial_fraction_reduce",
    "sigma_generators_independent",
    "sigma_reduce",
    "EmsJob",
    "EmsResult",
    "MultiSumEvaluator",
    "evaluate_multisum",
]
