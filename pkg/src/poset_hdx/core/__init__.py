"""Chains, links, localization and validation of weighted graded posets."""

from .chains import chain_sum, chain_sums_above, descent_distribution, maximal_chains
from .links import LinkTable, build_link, link_poset, localize_cochain, restrict
from .validation import validate_poset

__all__ = [
    "chain_sum",
    "chain_sums_above",
    "descent_distribution",
    "maximal_chains",
    "LinkTable",
    "build_link",
    "link_poset",
    "localize_cochain",
    "restrict",
    "validate_poset",
]
