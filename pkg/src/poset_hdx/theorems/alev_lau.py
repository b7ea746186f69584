"""Eigenvalue counting for M+_l from the link spectra of an AL poset."""

import logging
from typing import Optional

import numpy as np

from ..core.links import LinkTable
from ..exceptions import HypothesisLedger
from ..models.poset import GradedPoset, WeightScheme
from ..models.reports import ALReport, BoundCheck, RegularityReport
from ..operators.linear import LinearOp
from ..operators.walks import adjacency_operator, down_up_walk, up_down_walk
from ..performance import timed_operation
from ..properties.regularity import detect_regularity
from ..properties.weight_properties import check_AL
from ..spectral.eigen import symmetric_eigenvalues, weighted_spectrum

logger = logging.getLogger(__name__)

PSD_TOLERANCE = 1e-9
COUNT_TOLERANCE = 1e-9


def link_adjacency_maxima(table: LinkTable, j: int) -> Optional[float]:
    """mu_j: the largest lambda_2 of A_{s,0} over s in P(j)."""
    values = [
        weighted_spectrum(adjacency_operator(link.poset, link.weights, 0)).lambda_2
        for link in table.links_at(j)
    ]
    present = [v for v in values if v is not None]
    return max(present) if present else None


def count_thresholds(
    regularity: RegularityReport, mus: dict[int, float], l: int
) -> dict[int, float]:
    """
    For r = -1..l, 1 - prod_{j=r..l-1} ((N^low_(j+2) - 1)/N^low_(j+2)) (1 - mu_j).

    At r = l the product is empty and the threshold is 0.
    """
    thresholds: dict[int, float] = {}
    for r in range(-1, l + 1):
        product = 1.0
        for j in range(r, l):
            n = regularity.n_low[j + 2]
            product *= (n - 1) / n * (1.0 - mus[j])  # type: ignore[operator]
        thresholds[r] = 1.0 - product
    return thresholds


@timed_operation("alev_lau_bound")
def alev_lau_bound(
    poset: GradedPoset,
    weights: WeightScheme,
    l: int,
    regularity: Optional[RegularityReport] = None,
    al_report: Optional[ALReport] = None,
    table: Optional[LinkTable] = None,
) -> BoundCheck:
    """
    Check that at most |P(r)| eigenvalues of M+_l exceed the r-th threshold.

    Also checks that mu_(l-1)(Id - M-_l) - A_l + M-_l is positive semidefinite,
    and reports the r = -1 threshold as the bound on lambda_2(M+_l).

    Raises:
        HypothesisError: Unless the scheme is standard, the poset lower regular
            at levels 1..l+1, AL exact and 0 <= l <= d-1.
    """
    ledger = HypothesisLedger("alev_lau")
    standard = ledger.require(weights.is_standard(poset), "standard weight scheme")
    ledger.require(0 <= l <= poset.d - 1, f"0 <= l <= {poset.d - 1}")
    regularity = regularity or detect_regularity(poset, local=False)
    ledger.require(
        all(regularity.lower_regular_at(i) for i in range(1, l + 2)),
        f"lower regular at levels 1..{l + 1}",
    )
    if standard:
        al_report = al_report or check_AL(poset, weights)
        ledger.require(al_report.exact, "exact property AL")
    ledger.raise_if_unmet()

    table = table or LinkTable(poset, weights)
    mus: dict[int, float] = {}
    for j in range(-1, l):
        mu = link_adjacency_maxima(table, j)
        mus[j] = mu if mu is not None else 0.0

    lower = down_up_walk(poset, weights, l)
    adjacency = adjacency_operator(poset, weights, l)
    identity = np.eye(len(lower.matrix))
    form = LinearOp(
        f"AL_{l}",
        l,
        l,
        mus[l - 1] * (identity - lower.matrix) - adjacency.matrix + lower.matrix,
        poset,
        weights,
    )
    psd_min = float(symmetric_eigenvalues(form.symmetrized())[-1])

    summary = weighted_spectrum(up_down_walk(poset, weights, l))
    eigenvalues = np.array(summary.eigenvalues)
    thresholds = count_thresholds(regularity, mus, l)
    counts = {r: int(np.sum(eigenvalues > t + COUNT_TOLERANCE)) for r, t in thresholds.items()}
    count_ok = {r: counts[r] <= poset.level_size(r) for r in thresholds}
    lambda_2 = summary.lambda_2
    bound = thresholds[-1]
    verdict = (
        psd_min >= -PSD_TOLERANCE
        and all(count_ok.values())
        and (lambda_2 is None or lambda_2 <= bound + COUNT_TOLERANCE)
    )
    logger.info(
        f"Alev-Lau at l={l}: lambda_2 {lambda_2} vs bound {bound:.6g}, psd min {psd_min:.3e}"
    )
    return BoundCheck(
        theorem="alev_lau",
        bound=bound,
        measured=lambda_2,
        verdict=verdict,
        details={
            "l": l,
            "mu": mus,
            "psd_min": psd_min,
            "thresholds": thresholds,
            "counts": counts,
            "level_sizes": {r: poset.level_size(r) for r in thresholds},
        },
    )
