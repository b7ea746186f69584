"""UL and TL constants implied by structural regularity."""

import logging
from typing import Optional

from ..exceptions import MissingRegularityError
from ..models.reports import LocalConstants, PredictedConstants, RegularityReport

logger = logging.getLogger(__name__)


def ul_constants(
    n_low_i: int, n_low_next: int, n_mid_i: int, n_wedge_i: int
) -> tuple[float, float, float]:
    """(c_xyz, c_dia, c_sqr) of a standard regular poset at one level."""
    c_xyz = n_low_next / n_mid_i
    c_dia = n_wedge_i * n_low_next / (n_low_i * n_mid_i)
    c_sqr = 1.0 / n_low_next
    return c_xyz, c_dia, c_sqr


def tl_constants(
    n_low_1: int, n_low_2: int, n_mid_1: int, r_y: int
) -> Optional[tuple[float, float, float, float]]:
    """
    (c_same, c_diff, c_same2, c_diff2) of a standard 2-skeleton regular poset.

    None when a denominator vanishes (N^low_1 = 1, or N^mid_1 = 1 with R^Y > 1).
    """
    if n_low_1 < 2:
        return None
    c_same = 1.0 / (n_low_1 - 1)
    c_diff = (n_low_1 - 2) / (n_low_1 - 1)
    descendants = n_low_2 * n_low_1 / n_mid_1
    if n_mid_1 == 1:
        return None
    c_same2 = (descendants - 1) * r_y * (r_y - 1) / ((n_mid_1 - 1) * n_mid_1 * (n_low_1 - 1) ** 2)
    c_diff2 = ((descendants - 2) * r_y - (n_low_1 - 2)) / ((n_mid_1 - 1) * (n_low_1 - 1))
    return c_same, c_diff, c_same2, c_diff2


def trickle_constants(local: LocalConstants) -> Optional[tuple[float, float]]:
    """(C, B) of the trickling map T(x; C, B) = (Cx - B)/(1 - x) for one link rank."""
    if not local.two_skeleton_regular:
        return None
    predicted = tl_constants(
        local.n_low_1, local.n_low_2, local.n_mid_1, local.r_y  # type: ignore[arg-type]
    )
    if predicted is None:
        return None
    c_same, _, c_same2, _ = predicted
    return c_same, c_same2


def constants_from_regularity(report: RegularityReport) -> PredictedConstants:
    """
    Predict UL constants per level, and TL constants when 2-skeleton regular.

    Raises:
        MissingRegularityError: If the poset is not lower, middle and wedge regular.
    """
    if not report.is_regular:
        missing = [
            name
            for name, flag in (
                ("lower", report.lower_regular),
                ("middle", report.middle_regular),
                ("wedge", report.wedge_regular),
            )
            if not flag
        ]
        raise MissingRegularityError(
            message="UL constants need a lower, middle and wedge regular poset",
            details={"missing": missing},
        )
    predicted = PredictedConstants()
    for i in range(0, report.d):
        predicted.ul[i] = ul_constants(
            report.n_low[i],  # type: ignore[arg-type]
            report.n_low[i + 1],  # type: ignore[arg-type]
            report.n_mid[i],  # type: ignore[arg-type]
            report.n_wedge[i],  # type: ignore[arg-type]
        )
    if report.two_skeleton_regular:
        predicted.tl = tl_constants(
            report.n_low[1], report.n_low[2], report.n_mid[1], report.r_y  # type: ignore[arg-type]
        )
    logger.debug(f"Predicted UL constants at {len(predicted.ul)} levels, TL={predicted.tl}")
    return predicted
