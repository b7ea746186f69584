"""Structural regularity and the UL, AL and TL weight properties."""

from .predictions import constants_from_regularity, tl_constants, trickle_constants, ul_constants
from .regularity import detect_regularity, ns_relation, two_skeleton_constants, y_relation
from .weight_properties import al_sides, check_AL, check_TL, check_UL, two_step_sum

__all__ = [
    "constants_from_regularity",
    "tl_constants",
    "trickle_constants",
    "ul_constants",
    "detect_regularity",
    "ns_relation",
    "two_skeleton_constants",
    "y_relation",
    "al_sides",
    "check_AL",
    "check_TL",
    "check_UL",
    "two_step_sum",
]
