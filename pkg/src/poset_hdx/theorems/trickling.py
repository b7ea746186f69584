"""
Trickling-down intervals for link spectra.

Starting from the nontrivial spectra of the links at rank d-2, the map
T(x; C, B) = (Cx - B)/(1 - x) carries an interval containing the link
spectra at rank j+1 to one containing those at rank j.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..core.links import LinkTable
from ..exceptions import BadArgumentsError, HypothesisLedger, PosetError
from ..models.poset import GradedPoset, WeightScheme
from ..models.reports import RegularityReport, TricklingBound
from ..operators.walks import adjacency_operator
from ..performance import timed_operation
from ..properties.predictions import trickle_constants
from ..properties.regularity import detect_regularity
from ..properties.weight_properties import check_TL
from ..spectral.connectivity import locally_connected
from ..spectral.eigen import weighted_spectrum

logger = logging.getLogger(__name__)

TRICKLE_TOLERANCE = 1e-9
ATTRACTIVE = "attractive"
REPULSIVE = "repulsive"
NEUTRAL = "neutral"


def trickle_map(x: float, c: float, b: float) -> float:
    """T(x; C, B); +inf at and beyond the pole x = 1."""
    if x >= 1.0:
        return math.inf
    return (c * x - b) / (1.0 - x)


def trickle_derivative(x: float, c: float, b: float) -> float:
    """T'(x) = (C - B)/(1 - x)^2."""
    if x == 1.0:
        raise BadArgumentsError(message="T has a pole at x = 1")
    return (c - b) / (1.0 - x) ** 2


def fixed_points(c: float, b: float) -> list[float]:
    """Real roots of x^2 + (C - 1) x - B = 0, ascending."""
    roots = np.roots([1.0, c - 1.0, -b])
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-12)
    return [r for r in real if r != 1.0]


def stability(x: float, c: float, b: float, tol: float = 1e-12) -> str:
    """Attractive when |T'(x)| < 1, repulsive when > 1, neutral otherwise."""
    slope = abs(trickle_derivative(x, c, b))
    if abs(slope - 1.0) <= tol:
        return NEUTRAL
    return ATTRACTIVE if slope < 1.0 else REPULSIVE


def map_interval(interval: tuple[float, float], c: float, b: float) -> tuple[float, float]:
    """Image of [lo, hi] under T, which is monotone left of the pole."""
    lo, hi = interval
    ends = [trickle_map(lo, c, b), trickle_map(hi, c, b)]
    return min(ends), max(ends)


def grassmannian_orbit(q: int, d: int, eps: float) -> list[float]:
    """x, T(x), ..., T^(d-2)(x) for x = (q - 1 + eps)/q and T(x) = x/(q(1 - x))."""
    x = (q - 1 + eps) / q
    orbit = [x]
    for _ in range(max(d - 2, 0)):
        x = trickle_map(x, 1.0 / q, 0.0)
        orbit.append(x)
    return orbit


def link_extremes(table: LinkTable, j: int) -> Optional[tuple[float, float]]:
    """Smallest and largest nontrivial A_0 eigenvalue over the links of P(j)."""
    lows: list[float] = []
    highs: list[float] = []
    for link in table.links_at(j):
        summary = weighted_spectrum(adjacency_operator(link.poset, link.weights, 0))
        if summary.nontrivial:
            lows.append(min(summary.nontrivial))
            highs.append(max(summary.nontrivial))
    if not highs:
        return None
    return min(lows), max(highs)


def _general_interval(
    table: LinkTable, j: int, measured_above: dict[int, tuple[float, float]]
) -> Optional[tuple[float, float]]:
    """
    One-step interval at rank j from measured TL constants of each link and
    the measured spectra of the links one rank up.

    None when some link lacks exact TL.
    """
    poset = table.poset
    lows: list[float] = []
    highs: list[float] = []
    for link in table.links_at(j):
        tl = check_TL(link.poset, link.weights)
        if not tl.exact:
            return None
        above = [measured_above[y] for y in poset.parents[link.base] if y in measured_above]
        if not above:
            continue
        nu = min(v[0] for v in above)
        mu = max(v[1] for v in above)
        lo, hi = map_interval((nu, mu), tl.c_same, tl.c_same2)
        lows.append(lo)
        highs.append(hi)
    if not highs:
        return None
    return min(lows), max(highs)


def _per_element_extremes(table: LinkTable, j: int) -> dict[int, tuple[float, float]]:
    extremes: dict[int, tuple[float, float]] = {}
    for link in table.links_at(j):
        summary = weighted_spectrum(adjacency_operator(link.poset, link.weights, 0))
        if summary.nontrivial:
            extremes[link.base] = (min(summary.nontrivial), max(summary.nontrivial))
    return extremes


@timed_operation("trickle_verify")
def trickle_verify(
    poset: GradedPoset,
    weights: WeightScheme,
    regularity: Optional[RegularityReport] = None,
    table: Optional[LinkTable] = None,
    tol: float = TRICKLE_TOLERANCE,
) -> TricklingBound:
    """
    Propagate [nu, mu] from rank d-2 down to the poset itself and compare
    every level with the measured link spectra.

    Levels whose links share 2-skeleton constants use T with
    C = 1/(N^low_1 - 1) and B = c_same2 of that link 2-skeleton, iterated from
    the propagated interval. Other levels fall back to the one-step form with
    the measured TL constants of each link and the measured spectra one rank up.

    Raises:
        HypothesisError: Unless d >= 2, the scheme is standard and the poset is
            locally connected.
    """
    ledger = HypothesisLedger("trickling")
    ledger.require(poset.d >= 2, "rank d >= 2")
    ledger.require(weights.is_standard(poset), "standard weight scheme")
    table = table or LinkTable(poset, weights)
    if poset.d >= 2:
        ledger.require(locally_connected(poset, weights, table), "locally connected")
    ledger.raise_if_unmet()

    regularity = regularity or detect_regularity(poset)
    start = poset.d - 2
    result = TricklingBound(source="structural", start_level=start)
    start_extremes = link_extremes(table, start)
    if start_extremes is None:
        result.notes.append(f"no nontrivial spectrum at rank {start}")
        return result
    result.intervals[start] = start_extremes
    result.measured[start] = start_extremes
    result.verdicts[start] = True

    measured_above = _per_element_extremes(table, start)
    general_levels: list[int] = []
    for j in range(start - 1, -2, -1):
        measured = link_extremes(table, j)
        local = regularity.local.get(j)
        constants = trickle_constants(local) if local is not None else None
        if constants is not None:
            c, b = constants
            result.constants[j] = constants
            result.intervals[j] = map_interval(result.intervals[j + 1], c, b)
            points = fixed_points(c, b)
            result.fixed_points[j] = points
            result.stability[j] = [stability(x, c, b) for x in points]
        else:
            try:
                interval = _general_interval(table, j, measured_above)
            except PosetError as e:
                result.notes.append(f"rank {j}: {e}")
                interval = None
            if interval is None:
                result.notes.append(f"rank {j}: no structural constants and no exact TL")
                break
            result.intervals[j] = interval
            general_levels.append(j)
        if measured is not None:
            lo, hi = result.intervals[j]
            result.measured[j] = measured
            result.verdicts[j] = lo - tol <= measured[0] and measured[1] <= hi + tol
        measured_above = _per_element_extremes(table, j)

    if general_levels:
        result.source = "general" if len(general_levels) == len(result.intervals) - 1 else "mixed"
    logger.info(
        f"Trickling from rank {start}: intervals {result.intervals}, verdict {result.verdict}"
    )
    return result
