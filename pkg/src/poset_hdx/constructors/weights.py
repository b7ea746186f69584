"""Weight schemes: the standard scheme and seeded perturbations of it."""

import logging
from typing import Mapping, Optional

import numpy as np

from ..exceptions import BadArgumentsError
from ..models.poset import CoverKey, ElementId, GradedPoset, WeightScheme

logger = logging.getLogger(__name__)


def _normalized_tops(
    poset: GradedPoset, top_weights: Optional[Mapping[ElementId, float]]
) -> dict[ElementId, float]:
    tops = poset.level(poset.d)
    if top_weights is None:
        return {y: 1.0 / len(tops) for y in tops}
    total = float(sum(top_weights.get(y, 0.0) for y in tops))
    if total <= 0 or any(top_weights.get(y, 0.0) <= 0 for y in tops):
        raise BadArgumentsError(message="Top weights must be positive on every top element")
    return {y: top_weights[y] / total for y in tops}


def propagate_weights(
    poset: GradedPoset,
    p: Mapping[CoverKey, float],
    top_weights: Optional[Mapping[ElementId, float]] = None,
) -> WeightScheme:
    """
    Push top weights down: m(x) = sum over covers y of p(y -> x) m(y).

    Args:
        poset: Pure graded poset.
        p: Transition probabilities keyed ``(child, parent)``.
        top_weights: Weights of the rank-d elements (normalized); uniform if omitted.
    """
    m = np.zeros(len(poset))
    for y, w in _normalized_tops(poset, top_weights).items():
        m[y] = w
    for rank in range(poset.d - 1, -2, -1):
        for x in poset.level(rank):
            m[x] = sum(p[(x, y)] * m[y] for y in poset.parents[x])
    return WeightScheme(m=m, p=dict(p))


def standard_weight_scheme(
    poset: GradedPoset, top_weights: Optional[Mapping[ElementId, float]] = None
) -> WeightScheme:
    """The standard scheme: p(y -> x) = 1/NN(y), m propagated from the top weights."""
    p = {(x, y): 1.0 / poset.nn(y) for x, y in poset.covers()}
    return propagate_weights(poset, p, top_weights)


def perturbed_weight_scheme(
    poset: GradedPoset,
    jitter: float = 0.01,
    seed: int = 0,
    top_weights: Optional[Mapping[ElementId, float]] = None,
) -> WeightScheme:
    """
    Jitter top weights and transition probabilities by a relative ``jitter``.

    Transition probabilities are renormalized per parent. Jittering only the
    top weights keeps every UL sum constant on standard simplicial schemes,
    so both are perturbed to produce approximate-UL instances.
    """
    if not 0 <= jitter < 1:
        raise BadArgumentsError(message=f"jitter must lie in [0, 1), got {jitter}")
    rng = np.random.default_rng(seed)
    base = _normalized_tops(poset, top_weights)
    tops = {y: w * (1 + rng.uniform(-jitter, jitter)) for y, w in sorted(base.items())}
    p: dict[CoverKey, float] = {}
    for y in poset.elements:
        kids = poset.children[y]
        if not kids:
            continue
        raw = np.array([1.0 + rng.uniform(-jitter, jitter) for _ in kids])
        raw /= raw.sum()
        for x, value in zip(kids, raw):
            p[(x, y)] = float(value)
    logger.debug(f"Perturbed weight scheme with jitter {jitter} and seed {seed}")
    return propagate_weights(poset, p, tops)
