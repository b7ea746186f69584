"""Up/down operators, the two walks, adjacency operators and the hat localization.

Walk operators are built twice, as matrix products and from their closed-form
entries, and the two are compared at build time.
"""

import logging

import numpy as np

from ..exceptions import BadRankError, DegenerateCoverError, PosetError
from ..models.poset import Cochain, ElementId, GradedPoset, Link, WeightScheme
from .linear import LinearOp

logger = logging.getLogger(__name__)

BOOKKEEPING_TOLERANCE = 1e-10
NON_SELF_ADJOINT = "non-self-adjoint possible"


def _check_level(poset: GradedPoset, k: int, low: int, high: int, what: str) -> None:
    if not low <= k <= high:
        raise BadRankError(
            message=f"{what} is defined for levels {low}..{high}", level=k
        )


def up_operator(poset: GradedPoset, weights: WeightScheme, k: int) -> LinearOp:
    """U_k: C^k -> C^(k+1), (U g)(y) = sum over children x of p(y -> x) g(x)."""
    _check_level(poset, k, -1, poset.d - 1, "U_k")
    matrix = np.zeros((poset.level_size(k + 1), poset.level_size(k)))
    for y in poset.level(k + 1):
        for x in poset.children[y]:
            matrix[poset.position(y), poset.position(x)] = weights.prob(y, x)
    return LinearOp(f"U_{k}", k, k + 1, matrix, poset, weights)


def down_operator(poset: GradedPoset, weights: WeightScheme, k: int) -> LinearOp:
    """D_k: C^k -> C^(k-1), (D f)(x) = sum over covers y of p(y -> x) m(y)/m(x) f(y)."""
    _check_level(poset, k, 0, poset.d, "D_k")
    m = weights.m
    matrix = np.zeros((poset.level_size(k - 1), poset.level_size(k)))
    for y in poset.level(k):
        for x in poset.children[y]:
            matrix[poset.position(x), poset.position(y)] = weights.prob(y, x) * m[y] / m[x]
    return LinearOp(f"D_{k}", k, k - 1, matrix, poset, weights)


def up_down_entries(poset: GradedPoset, weights: WeightScheme, k: int) -> np.ndarray:
    """Closed form: M+[y, x] = sum over z covering x and y of m(z) p(z->x) p(z->y) / m(y)."""
    m = weights.m
    matrix = np.zeros((poset.level_size(k), poset.level_size(k)))
    for z in poset.level(k + 1):
        for y in poset.children[z]:
            for x in poset.children[z]:
                matrix[poset.position(y), poset.position(x)] += (
                    m[z] * weights.prob(z, x) * weights.prob(z, y) / m[y]
                )
    return matrix


def down_up_entries(poset: GradedPoset, weights: WeightScheme, k: int) -> np.ndarray:
    """Closed form: M-[y, x] = sum over z below x and y of p(y->z) p(x->z) m(x) / m(z)."""
    m = weights.m
    matrix = np.zeros((poset.level_size(k), poset.level_size(k)))
    for z in poset.level(k - 1):
        for y in poset.parents[z]:
            for x in poset.parents[z]:
                matrix[poset.position(y), poset.position(x)] += (
                    weights.prob(y, z) * weights.prob(x, z) * m[x] / m[z]
                )
    return matrix


def _cross_check(product: np.ndarray, closed: np.ndarray, name: str) -> None:
    gap = float(np.max(np.abs(product - closed))) if product.size else 0.0
    if gap > BOOKKEEPING_TOLERANCE:
        logger.error(f"{name}: product and closed form differ by {gap:.3e}")
        raise PosetError(
            message=f"{name} product form disagrees with its entry formula",
            details={"gap": gap},
        )


def up_down_walk(poset: GradedPoset, weights: WeightScheme, k: int) -> LinearOp:
    """M+_k = D_(k+1) U_k."""
    _check_level(poset, k, -1, poset.d - 1, "M+_k")
    walk = down_operator(poset, weights, k + 1) @ up_operator(poset, weights, k)
    _cross_check(walk.matrix, up_down_entries(poset, weights, k), f"M+_{k}")
    return LinearOp(f"M+_{k}", k, k, walk.matrix, poset, weights)


def down_up_walk(poset: GradedPoset, weights: WeightScheme, k: int) -> LinearOp:
    """M-_k = U_(k-1) D_k."""
    _check_level(poset, k, 0, poset.d, "M-_k")
    walk = up_operator(poset, weights, k - 1) @ down_operator(poset, weights, k)
    _cross_check(walk.matrix, down_up_entries(poset, weights, k), f"M-_{k}")
    return LinearOp(f"M-_{k}", k, k, walk.matrix, poset, weights)


def adjacency_operator(poset: GradedPoset, weights: WeightScheme, l: int) -> LinearOp:
    """
    A_l: the non-lazy walk between distinct elements of level l sharing a cover.

    (A f)(x) = (1/m(x)) sum over z covering x, y != x in z of
    m(z) p(z->y) p(z->x) / (1 - p(z->x)) f(y).

    Raises:
        BadRankError: If l is outside 0..d-1.
        DegenerateCoverError: If some z in P(l+1) covers a single element.
    """
    _check_level(poset, l, 0, poset.d - 1, "A_l")
    m = weights.m
    matrix = np.zeros((poset.level_size(l), poset.level_size(l)))
    for z in poset.level(l + 1):
        kids = poset.children[z]
        if len(kids) < 2 or any(weights.prob(z, x) >= 1.0 for x in kids):
            raise DegenerateCoverError(
                message="Adjacency needs every cover element to cover at least two elements",
                element=poset.label(z),
                level=l + 1,
            )
        for x in kids:
            px = weights.prob(z, x)
            for y in kids:
                if y != x:
                    matrix[poset.position(x), poset.position(y)] += (
                        m[z] * weights.prob(z, y) * px / (1.0 - px)
                    )
    matrix /= weights.level_masses(poset, l)[:, None]
    flags = () if weights.is_standard(poset) else (NON_SELF_ADJOINT,)
    return LinearOp(f"A_{l}", l, l, matrix, poset, weights, flags)


def adjacency_vs_upper_residual(
    poset: GradedPoset, weights: WeightScheme, l: int, n_low: int
) -> float:
    """Entrywise gap between M+_l and ((N-1)/N) A_l + (1/N) Id with N = N^low_(l+1)."""
    upper = up_down_walk(poset, weights, l).matrix
    adjacency = adjacency_operator(poset, weights, l).matrix
    predicted = ((n_low - 1) / n_low) * adjacency + np.eye(len(adjacency)) / n_low
    return float(np.max(np.abs(upper - predicted)))


def hat_localize(
    poset: GradedPoset, weights: WeightScheme, f: Cochain, link: Link
) -> Cochain:
    """
    Hat localization of a level-0 cochain to the link of a vertex x.

    hf_x(z) = (1/(1 - p(z->x))) sum over y != x covered by z of p(z->y) f(y),
    for every z covering x.

    Raises:
        BadRankError: If the poset has rank < 2, ``f`` is not on level 0, or
            the link base is not a rank-0 element.
    """
    if poset.d < 2 or f.level != 0 or link.base_rank != 0:
        raise BadRankError(
            message="Hat localization needs rank >= 2, a level-0 cochain and a vertex link",
            level=f.level,
        )
    x: ElementId = link.base
    values = np.zeros(link.poset.level_size(0))
    for i in link.poset.level(0):
        z = link.to_parent[i]
        px = weights.prob(z, x)
        total = sum(
            weights.prob(z, y) * f.values[poset.position(y)]
            for y in poset.children[z]
            if y != x
        )
        values[link.poset.position(i)] = total / (1.0 - px)
    return Cochain(0, values)
