"""Translation of expressions into towers: constants, atoms and nested sums"""

from pisigma.construction.atoms import anchor_start, rational_value, shift_ratio
from pisigma.construction.builder import TowerBuilder
from pisigma.construction.constants import ConstantTranslator, constant_value, factorial_ratio, form_value, rising

__all__ = [
    "anchor_start",
    "rational_value",
    "shift_ratio",
    "TowerBuilder",
    "ConstantTranslator",
    "constant_value",
    "factorial_ratio",
    "form_value",
    "rising",
]
