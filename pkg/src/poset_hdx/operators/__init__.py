"""Operators on cochain spaces with weighted inner products."""

from .linear import InnerProductContext, LinearOp, weighted_inner_product
from .walks import (
    NON_SELF_ADJOINT,
    adjacency_operator,
    adjacency_vs_upper_residual,
    down_operator,
    down_up_entries,
    down_up_walk,
    hat_localize,
    up_down_entries,
    up_down_walk,
    up_operator,
)

__all__ = [
    "InnerProductContext",
    "LinearOp",
    "weighted_inner_product",
    "NON_SELF_ADJOINT",
    "adjacency_operator",
    "adjacency_vs_upper_residual",
    "down_operator",
    "down_up_entries",
    "down_up_walk",
    "hat_localize",
    "up_down_entries",
    "up_down_walk",
    "up_operator",
]
