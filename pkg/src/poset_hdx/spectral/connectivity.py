"""Connectivity of the 0-th upper walk, globally and in every link."""

import logging
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..core.links import LinkTable
from ..models.poset import GradedPoset, WeightScheme
from ..operators.walks import up_down_walk

logger = logging.getLogger(__name__)


def is_connected(poset: GradedPoset, weights: WeightScheme) -> bool:
    """Whether the support digraph of M+_0 is strongly connected."""
    if poset.d < 1:
        return poset.level_size(0) <= 1
    walk = up_down_walk(poset, weights, 0).matrix
    n_components, _ = connected_components(
        csr_matrix(np.abs(walk) > 0), directed=True, connection="strong"
    )
    return n_components == 1


def link_connectivity(
    poset: GradedPoset, weights: WeightScheme, table: Optional[LinkTable] = None
) -> dict[str, bool]:
    """Connectivity of the link of every x in P(<= d-2), keyed by label."""
    table = table or LinkTable(poset, weights)
    result: dict[str, bool] = {}
    for k in range(-1, poset.d - 1):
        for link in table.links_at(k):
            result[poset.label(link.base)] = is_connected(link.poset, link.weights)
    return result


def locally_connected(
    poset: GradedPoset, weights: WeightScheme, table: Optional[LinkTable] = None
) -> bool:
    """Whether every link of rank >= 1 (including P itself) is connected."""
    table_result = link_connectivity(poset, weights, table)
    broken = [label for label, ok in table_result.items() if not ok]
    if broken:
        logger.debug(f"Disconnected links: {', '.join(broken[:10])}")
    return not broken
