"""Polynomial difference-field towers, their rings, and extension checks"""

from pisigma.field.tower import GenKind, Generator, Tower, base_tower
from pisigma.field.ring import RingElem, monomial_shift_factor, sigma_apply, sigma_once
from pisigma.field.extensions import (
    PiRelation,
    ProductRep,
    RatioReduction,
    adjoin_pi,
    adjoin_sigma,
    check_pi_extension,
    fresh_generator_name,
    reduce_ratio,
    represent_products,
)
from pisigma.field.combination import Combination, OpaqueKey, UNIT_KEY, key_expr, make_key

__all__ = [
    "GenKind",
    "Generator",
    "Tower",
    "base_tower",
    "RingElem",
    "monomial_shift_factor",
    "sigma_apply",
    "sigma_once",
    "PiRelation",
    "ProductRep",
    "RatioReduction",
    "adjoin_pi",
    "adjoin_sigma",
    "check_pi_extension",
    "fresh_generator_name",
    "reduce_ratio",
    "represent_products",
    "Combination",
    "OpaqueKey",
    "UNIT_KEY",
    "key_expr",
    "make_key",
]
