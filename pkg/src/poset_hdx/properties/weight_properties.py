"""
Weight properties UL, AL and TL.

Each property asks a family of weighted sums to be constant (UL, TL) or two
families to agree (AL). Every sum is evaluated over all configurations; a
constant is reported as the midpoint of the observed range with half the
range as its deviation, so exact and approximate instances share one format.
"""

import logging
from collections import defaultdict
from itertools import combinations, permutations
from typing import Iterable

import numpy as np

from ..exceptions import BadRankError, DegenerateCoverError, NonStandardSchemeError
from ..models.poset import ElementId, GradedPoset, WeightScheme
from ..models.reports import ALReport, TLReport, ULLevel, ULReport
from ..performance import timed_operation

logger = logging.getLogger(__name__)

UNIFORMITY_TOLERANCE = 1e-9


def _midpoint(values: Iterable[float]) -> tuple[float, float]:
    """(midpoint, half-range) of ``values``; (0, 0) when empty."""
    values = list(values)
    if not values:
        return 0.0, 0.0
    low, high = min(values), max(values)
    return (low + high) / 2, (high - low) / 2


def two_step_sum(
    poset: GradedPoset, weights: WeightScheme, top: ElementId, bottom: ElementId
) -> float:
    """Sum of p(c) over the chains top > w > bottom of length two."""
    return sum(
        weights.prob(top, w) * weights.prob(w, bottom)
        for w in poset.children[top]
        if bottom in poset.children[w]
    )


def _require_standard(poset: GradedPoset, weights: WeightScheme, what: str) -> None:
    if not weights.is_standard(poset):
        raise NonStandardSchemeError(message=f"{what} is defined for standard weight schemes")


# ============================================================================
# UL
# ============================================================================

def _xyz_values(poset: GradedPoset, weights: WeightScheme, l: int) -> list[float]:
    values = []
    for y in poset.level(l):
        for x in poset.parents[y]:
            values.append(
                sum(
                    weights.prob(y, z) ** 2 / two_step_sum(poset, weights, x, z)
                    for z in poset.children[y]
                )
            )
    return values


def _dia_values(poset: GradedPoset, weights: WeightScheme, l: int) -> list[float]:
    values = []
    for x in poset.level(l + 1):
        for y1, y2 in combinations(poset.children[x], 2):
            values.append(
                sum(
                    weights.prob(y1, z) * weights.prob(y2, z) / two_step_sum(poset, weights, x, z)
                    for z in poset.common_children(y1, y2)
                )
            )
    return values


def _sqr_values(poset: GradedPoset, weights: WeightScheme, l: int) -> list[float]:
    m = weights.m
    return [
        sum(m[x] * weights.prob(x, y) ** 2 for x in poset.parents[y]) / m[y]
        for y in poset.level(l)
    ]


@timed_operation("check_UL")
def check_UL(
    poset: GradedPoset, weights: WeightScheme, tol: float = UNIFORMITY_TOLERANCE
) -> ULReport:
    """
    Measure the UL sums at every level 0..d-1.

    A level without two elements sharing a cover has no diamond configuration,
    so UL.2 holds for any constant and the usual reading is c_dia = 0. Such a
    level reports c_dia = c_xyz instead, which keeps the 1/c_dia factors of
    the localization identities finite, and sets ``diamond_free``.
    """
    report = ULReport()
    for l in range(0, poset.d):
        c_xyz, eps_xyz = _midpoint(_xyz_values(poset, weights, l))
        dia = _dia_values(poset, weights, l)
        c_dia, eps_dia = _midpoint(dia) if dia else (c_xyz, 0.0)
        c_sqr, eps_sqr = _midpoint(_sqr_values(poset, weights, l))
        report.levels[l] = ULLevel(
            l, c_xyz, eps_xyz, c_dia, eps_dia, c_sqr, eps_sqr, diamond_free=not dia
        )
    report.exact = all(level.eps < tol for level in report.levels.values())
    logger.info(
        f"UL measured on levels 0..{poset.d - 1}: "
        f"{'exact' if report.exact else 'approximate'}"
    )
    return report


# ============================================================================
# AL
# ============================================================================

def al_sides(
    poset: GradedPoset, weights: WeightScheme, x: ElementId, y: ElementId
) -> tuple[float, float]:
    """Both sides of the AL equation for x != y on one level."""
    m = weights.m
    lhs = 0.0
    rhs = 0.0
    below = poset.common_children(x, y)
    for z in poset.common_parents(x, y):
        pzx = weights.prob(z, x)
        weight = m[z] * pzx * weights.prob(z, y)
        lhs += weight / (1.0 - pzx)
        inner = 0.0
        for s in below:
            other_chains = two_step_sum(poset, weights, z, s) - pzx * weights.prob(x, s)
            inner += weights.prob(x, s) * weights.prob(y, s) / other_chains
        rhs += weight * inner
    return lhs, rhs


@timed_operation("check_AL")
def check_AL(
    poset: GradedPoset, weights: WeightScheme, tol: float = UNIFORMITY_TOLERANCE
) -> ALReport:
    """
    Relative deviation between the two sides of the AL equation over all
    ordered pairs x != y sharing an upper cover.

    Raises:
        NonStandardSchemeError: If the scheme is not standard.
        DegenerateCoverError: If a cover element covers a single element.
    """
    _require_standard(poset, weights, "Property AL")
    report = ALReport()
    for l in range(0, poset.d):
        worst = 0.0
        pairs: set[tuple[ElementId, ElementId]] = set()
        for z in poset.level(l + 1):
            if poset.nn(z) < 2:
                raise DegenerateCoverError(
                    message="Property AL needs every cover element to cover two elements",
                    element=poset.label(z),
                    level=l + 1,
                )
            pairs.update(permutations(poset.children[z], 2))
        for x, y in sorted(pairs):
            lhs, rhs = al_sides(poset, weights, x, y)
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
        report.level_deviations[l] = worst
        report.pairs_checked += len(pairs)
    report.max_deviation = max(report.level_deviations.values(), default=0.0)
    report.exact = report.max_deviation < tol
    logger.info(
        f"AL max relative deviation {report.max_deviation:.3e} "
        f"over {report.pairs_checked} pairs"
    )
    return report


# ============================================================================
# TL
# ============================================================================

def _pair_weight(poset: GradedPoset, weights: WeightScheme, z: ElementId) -> float:
    nn = poset.nn(z)
    return weights.m[z] / (nn * (nn - 1))


@timed_operation("check_TL")
def check_TL(
    poset: GradedPoset, weights: WeightScheme, tol: float = UNIFORMITY_TOLERANCE
) -> TLReport:
    """
    Measure the four TL constants in their standard-scheme forms.

    ``orphan_mass`` collects right-hand-side mass of the fourth family on pairs
    that share no cover, where no constant can balance it.

    Raises:
        NonStandardSchemeError: If the scheme is not standard.
        BadRankError: If the poset has rank < 2.
        DegenerateCoverError: If an element of rank 1 covers a single element.
    """
    _require_standard(poset, weights, "Property TL")
    if poset.d < 2:
        raise BadRankError(message="Property TL needs rank >= 2", level=poset.d)
    for z in poset.level(1):
        if poset.nn(z) < 2:
            raise DegenerateCoverError(
                message="Property TL needs every rank-1 element to cover two elements",
                element=poset.label(z),
                level=1,
            )
    m = weights.m
    nn = poset.nn

    same: list[float] = []
    lhs_pair: dict[tuple[ElementId, ElementId], float] = defaultdict(float)
    for y in poset.level(0):
        same.append(sum(_pair_weight(poset, weights, z) for z in poset.parents[y]) / m[y])
    for z in poset.level(1):
        base = _pair_weight(poset, weights, z)
        for y1, y2 in permutations(poset.children[z], 2):
            lhs_pair[(y1, y2)] += base
    rhs_pair: dict[tuple[ElementId, ElementId], float] = defaultdict(float)
    for z in poset.level(1):
        value = m[z] * (nn(z) - 2) / (nn(z) * (nn(z) - 1) ** 2)
        for y1, y2 in permutations(poset.children[z], 2):
            rhs_pair[(y1, y2)] += value
    diff = [rhs_pair[pair] / lhs for pair, lhs in sorted(lhs_pair.items())]

    rhs_same2: dict[ElementId, float] = defaultdict(float)
    rhs_diff2: dict[tuple[ElementId, ElementId], float] = defaultdict(float)
    for u in poset.level(2):
        for z, w in permutations(poset.children[u], 2):
            for x in poset.common_children(z, w):
                others = sum(
                    1.0 / nn(v) for v in poset.children[u] if v != z and x in poset.children[v]
                )
                term = m[u] / (nn(u) * nn(w) * (nn(w) - 1) * nn(z) * (nn(z) - 1) * others)
                for y1 in poset.children[w]:
                    if y1 == x:
                        continue
                    for y2 in poset.children[z]:
                        if y2 == x:
                            continue
                        if y1 == y2:
                            rhs_same2[y1] += term
                        else:
                            rhs_diff2[(y1, y2)] += term
    same2 = [rhs_same2.get(y, 0.0) / m[y] for y in poset.level(0)]
    diff2 = [rhs_diff2.get(pair, 0.0) / lhs for pair, lhs in sorted(lhs_pair.items())]
    orphan = float(sum(v for pair, v in rhs_diff2.items() if pair not in lhs_pair))

    c_same, eps_same = _midpoint(same)
    c_diff, eps_diff = _midpoint(diff)
    c_same2, eps_same2 = _midpoint(same2)
    c_diff2, eps_diff2 = _midpoint(diff2)
    exact = max(eps_same, eps_diff, eps_same2, eps_diff2, orphan) < tol
    report = TLReport(
        c_same, eps_same, c_diff, eps_diff, c_same2, eps_same2, c_diff2, eps_diff2, exact, orphan
    )
    logger.info(f"TL constants {tuple(np.round(report.constants, 12))}, exact={exact}")
    return report
