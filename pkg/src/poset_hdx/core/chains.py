"""Maximal chain enumeration and chain-probability sums."""

import heapq
import logging

from ..exceptions import NotComparableError
from ..models.poset import Chain, ElementId, GradedPoset, WeightScheme

logger = logging.getLogger(__name__)


def maximal_chains(poset: GradedPoset, y: ElementId, x: ElementId) -> list[Chain]:
    """
    Enumerate all maximal chains from ``y`` down to ``x``.

    Chains are listed bottom to top; the order follows the element order of
    the children visited, so it is deterministic.

    Raises:
        NotComparableError: If ``x`` is not below ``y``.
    """
    if not poset.leq(x, y):
        raise NotComparableError(
            message="Chains require x <= y",
            element=f"{poset.label(x)} / {poset.label(y)}",
        )
    above_x = poset.ancestors(x)
    chains: list[Chain] = []

    def descend(path: list[ElementId]) -> None:
        current = path[-1]
        if current == x:
            chains.append(Chain(tuple(reversed(path))))
            return
        for child in poset.children[current]:
            if child in above_x:
                path.append(child)
                descend(path)
                path.pop()

    descend([y])
    return chains


def chain_sums_above(
    poset: GradedPoset, weights: WeightScheme, x: ElementId
) -> dict[ElementId, float]:
    """
    Sum of chain probabilities from every ``y >= x`` down to ``x``.

    Computed by dynamic programming upward from ``x``:
    S(x) = 1 and S(y) = sum over children w >= x of p(y -> w) S(w).
    """
    above = sorted(poset.ancestors(x), key=lambda e: (poset.rank(e), e))
    sums: dict[ElementId, float] = {x: 1.0}
    for y in above:
        if y == x:
            continue
        total = 0.0
        for w in poset.children[y]:
            if w in sums:
                total += weights.prob(y, w) * sums[w]
        sums[y] = total
    return sums


def chain_sum(poset: GradedPoset, weights: WeightScheme, y: ElementId, x: ElementId) -> float:
    """Sum over chains c in Ch(y -> x) of p(c); zero when x is not below y."""
    if not poset.leq(x, y):
        return 0.0
    return chain_sums_above(poset, weights, x)[y]


def descent_distribution(
    poset: GradedPoset, weights: WeightScheme, y: ElementId
) -> dict[ElementId, float]:
    """
    Probability of reaching each element below ``y`` by the downward walk.

    Equals the chain-probability sum from ``y`` to each element; the values
    at any fixed rank sum to 1 for a valid scheme.
    """
    mass: dict[ElementId, float] = {y: 1.0}
    # highest rank first, so every element is complete before it spreads
    frontier = [(-poset.rank(y), y)]
    while frontier:
        _, current = heapq.heappop(frontier)
        for child in poset.children[current]:
            if child not in mass:
                mass[child] = 0.0
                heapq.heappush(frontier, (-poset.rank(child), child))
            mass[child] += mass[current] * weights.p.get((child, current), 0.0)
    return mass
