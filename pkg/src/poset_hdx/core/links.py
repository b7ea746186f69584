"""Links with induced weights, and localization of cochains to links."""

import logging
from typing import Optional

import numpy as np

from ..exceptions import BadRankError
from ..models.poset import Cochain, ElementId, GradedPoset, Link, WeightScheme
from ..performance import SimpleCache
from .chains import chain_sums_above

logger = logging.getLogger(__name__)


def link_poset(poset: GradedPoset, x: ElementId) -> tuple[GradedPoset, list[ElementId]]:
    """
    The elements ``y >= x`` reranked by ``rk(y) - rk(x) - 1``, without weights.

    Returns:
        The link poset and the parent element of each link element.

    Raises:
        BadRankError: If ``x`` is maximal.
    """
    base_rank = poset.rank(x)
    if poset.is_maximal(x) or base_rank > poset.d - 1:
        raise BadRankError(
            message="Links are only defined below the top level",
            element=poset.label(x),
            level=base_rank,
        )
    inside = poset.ancestors(x)
    above = sorted(inside, key=lambda y: (poset.rank(y), poset.label(y)))
    ranks = {y: poset.rank(y) - base_rank - 1 for y in above}
    labels = {y: poset.label(y) for y in above}
    covers = [(w, y) for y in above for w in poset.children[y] if w in inside]
    return GradedPoset.from_covers(ranks, labels, covers, d=poset.d - base_rank - 1), above


def build_link(poset: GradedPoset, weights: WeightScheme, x: ElementId) -> Link:
    """
    Build the link of ``x`` with its induced grading and weights.

    With S(y) the chain-probability sum from y down to x:
    m_x(y) = m(y) S(y) / m(x) and p_x(z -> y) = p(z -> y) S(y) / S(z).

    Raises:
        BadRankError: If ``x`` is maximal.
    """
    structure, above = link_poset(poset, x)
    sums = chain_sums_above(poset, weights, x)
    covers = [(w, y) for y in above for w in poset.children[y] if w in sums]

    index = {y: i for i, y in enumerate(above)}
    m_x = np.array([weights.m[y] * sums[y] / weights.m[x] for y in above])
    p_x = {
        (index[w], index[y]): weights.prob(y, w) * sums[w] / sums[y]
        for w, y in covers
    }
    return Link(
        base=x,
        base_rank=poset.rank(x),
        poset=structure,
        weights=WeightScheme(m=m_x, p=p_x),
        to_parent=tuple(above),
        parent_positions=tuple(poset.position(y) for y in above),
    )


def restrict(link: Link, values: np.ndarray, parent_level: int) -> np.ndarray:
    """Restrict level-``parent_level`` values of the parent poset to the link."""
    ids = link.poset.level(link.link_level(parent_level))
    return values[[link.parent_positions[i] for i in ids]]


def localize_cochain(f: Cochain, link: Link) -> Cochain:
    """
    Localize ``f`` to ``link``: f_x(y) = f(y) for every y >= x of the same rank.

    Raises:
        BadRankError: If the level of ``f`` is not above the link base.
    """
    if f.level <= link.base_rank:
        raise BadRankError(
            message="Localization needs a cochain above the link base",
            level=f.level,
            details={"base_rank": link.base_rank},
        )
    return Cochain(link.link_level(f.level), restrict(link, f.values, f.level))


class LinkTable:
    """
    Lazily built links of one weighted poset, shared by all verifiers.

    Links are cached, so building every link at a level once serves every
    later check on the same instance.
    """

    def __init__(
        self,
        poset: GradedPoset,
        weights: WeightScheme,
        cache: Optional[SimpleCache] = None,
    ):
        self.poset = poset
        self.weights = weights
        self._cache = cache or SimpleCache(max_size=max(len(poset), 1))

    def link(self, x: ElementId) -> Link:
        """The link of ``x``."""
        return self._cache.get_or_build(x, lambda: build_link(self.poset, self.weights, x))

    def links_at(self, k: int) -> list[Link]:
        """Links of every element of rank ``k``, in element order."""
        links = [self.link(x) for x in self.poset.level(k)]
        logger.debug(f"Built {len(links)} links at rank {k}")
        return links
