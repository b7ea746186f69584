"""Structural regularity: lower, middle, wedge and Y regularity, globally and per link."""

import logging
from collections import Counter
from itertools import combinations
from typing import Iterable, Optional

from ..core.links import link_poset
from ..models.poset import GradedPoset
from ..models.reports import LocalConstants, RegularityReport

logger = logging.getLogger(__name__)

RELATION_TOLERANCE = 1e-12


def _uniform(values: Iterable[int]) -> Optional[int]:
    """The common value of ``values``, or None when they differ or are absent."""
    distinct = set(values)
    return distinct.pop() if len(distinct) == 1 else None


def lower_counts(poset: GradedPoset, i: int) -> list[int]:
    """Number of children of each element of rank i."""
    return [poset.nn(x) for x in poset.level(i)]


def middle_counts(poset: GradedPoset, i: int) -> list[int]:
    """For each x in P(i+1) and z < x in P(i-1), the number of y with z < y < x."""
    counts: list[int] = []
    for x in poset.level(i + 1):
        between: Counter = Counter()
        for y in poset.children[x]:
            between.update(poset.children[y])
        counts.extend(between.values())
    return counts


def wedge_counts(poset: GradedPoset, i: int) -> list[int]:
    """For each pair y1 != y2 in P(i) with a common cover, the number of common children."""
    pairs: set[tuple[int, int]] = set()
    for x in poset.level(i + 1):
        pairs.update(combinations(poset.children[x], 2))
    return [len(poset.common_children(a, b)) for a, b in sorted(pairs)]


def descendants_at(poset: GradedPoset, u: int, rank: int) -> set[int]:
    """Elements of ``rank`` below ``u``."""
    frontier = {u}
    for _ in range(poset.rank(u) - rank):
        frontier = {c for y in frontier for c in poset.children[y]}
    return frontier


def y_counts(poset: GradedPoset) -> list[int]:
    """For each u in P(2) and y1 != y2 in P(0) below u, the number of z with y1, y2 < z < u."""
    counts: list[int] = []
    for u in poset.level(2):
        via: Counter = Counter()
        for z in poset.children[u]:
            via.update(combinations(poset.children[z], 2))
        for pair in combinations(sorted(descendants_at(poset, u, 0)), 2):
            counts.append(via.get(pair, 0))
    return counts


def two_skeleton_constants(poset: GradedPoset) -> LocalConstants:
    """N^low_1, N^low_2, N^mid_1 and R^Y of ``poset`` (None where nonuniform)."""
    return LocalConstants(
        n_low_1=_uniform(lower_counts(poset, 1)),
        n_low_2=_uniform(lower_counts(poset, 2)),
        n_mid_1=_uniform(middle_counts(poset, 1)),
        r_y=_uniform(y_counts(poset)),
    )


def _unify(constants: list[LocalConstants]) -> LocalConstants:
    return LocalConstants(
        n_low_1=_uniform_optional(c.n_low_1 for c in constants),
        n_low_2=_uniform_optional(c.n_low_2 for c in constants),
        n_mid_1=_uniform_optional(c.n_mid_1 for c in constants),
        r_y=_uniform_optional(c.r_y for c in constants),
    )


def _uniform_optional(values: Iterable[Optional[int]]) -> Optional[int]:
    values = list(values)
    if any(v is None for v in values):
        return None
    return _uniform(values)  # type: ignore[arg-type]


def ns_relation(n_low_l: int, n_mid_l: int, n_low_next: int, n_wedge_l: int) -> Optional[float]:
    """N^low_l (N^mid_l - 1) / ((N^low_(l+1) - 1) N^wedge_l), which equals 1 on regular posets."""
    denominator = (n_low_next - 1) * n_wedge_l
    if denominator == 0:
        return None
    return n_low_l * (n_mid_l - 1) / denominator


def y_relation(n_low_1: int, n_low_2: int, n_mid_1: int) -> Optional[float]:
    """The value R^Y is forced to take on 2-skeleton regular posets."""
    descendants = n_low_2 * n_low_1 / n_mid_1 - 1
    if descendants == 0:
        return None
    return n_mid_1 * (n_low_1 - 1) / descendants


def detect_regularity(poset: GradedPoset, local: bool = True) -> RegularityReport:
    """
    Count every regularity configuration and report the constants that exist.

    Args:
        poset: Graded poset.
        local: Also compute 2-skeleton constants of the links P_s for s in P(<= d-3),
            unified per rank of s.
    """
    report = RegularityReport(d=poset.d)
    for i in range(0, poset.d + 1):
        report.n_low[i] = _uniform(lower_counts(poset, i))
    for i in range(0, poset.d):
        report.n_mid[i] = _uniform(middle_counts(poset, i))
        report.n_wedge[i] = _uniform(wedge_counts(poset, i))
    if poset.d >= 2:
        report.r_y = _uniform(y_counts(poset))

    for l in range(0, poset.d):
        values = (report.n_low[l], report.n_mid[l], report.n_low.get(l + 1), report.n_wedge[l])
        if None not in values:
            relation = ns_relation(*values)  # type: ignore[arg-type]
            if relation is not None:
                report.relation_residuals[l] = abs(relation - 1.0)

    if report.two_skeleton_regular:
        expected = y_relation(
            report.n_low[1], report.n_low[2], report.n_mid[1]  # type: ignore[arg-type]
        )
        if expected is not None:
            report.r_y_residual = abs(report.r_y - expected)  # type: ignore[operator]

    if local and poset.d >= 2:
        for k in range(-1, poset.d - 2):
            per_link = [two_skeleton_constants(link_poset(poset, s)[0]) for s in poset.level(k)]
            report.local[k] = _unify(per_link)

    bad = {l: r for l, r in report.relation_residuals.items() if r > RELATION_TOLERANCE}
    if bad:
        logger.warning(f"Structure-constant relation violated at levels {sorted(bad)}")
    logger.debug(
        f"Regularity: n_low={report.n_low} n_mid={report.n_mid} "
        f"n_wedge={report.n_wedge} r_y={report.r_y}"
    )
    return report
