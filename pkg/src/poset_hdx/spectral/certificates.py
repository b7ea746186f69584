"""Local spectral expansion certificates and the global eposet certificate."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Mapping, Optional

import numpy as np

from ..core.links import LinkTable
from ..exceptions import BadRankError, NonStandardSchemeError
from ..models.enums import CertificateKind, ConstantsSource
from ..models.poset import ElementId, GradedPoset, WeightScheme
from ..models.reports import CertificateRow, EposetRow, ExpansionCertificate, RegularityReport
from ..operators.linear import LinearOp
from ..operators.walks import adjacency_operator, down_up_walk, up_down_walk
from ..performance import timed_operation
from ..properties.regularity import detect_regularity
from .connectivity import is_connected
from .eigen import weighted_operator_norm, weighted_spectrum

logger = logging.getLogger(__name__)

CERTIFICATE_TOLERANCE = 1e-9


def _require_standard(poset: GradedPoset, weights: WeightScheme) -> None:
    if not weights.is_standard(poset):
        raise NonStandardSchemeError(
            message="Local spectral certificates need a standard weight scheme"
        )


def _link_row(
    table: LinkTable, x: ElementId, nu: Optional[float], lam: float, tol: float
) -> CertificateRow:
    link = table.link(x)
    summary = weighted_spectrum(adjacency_operator(link.poset, link.weights, 0))
    lambda2 = summary.lambda_2
    lambdamin = summary.nontrivial_min
    passed = lambda2 is None or lambda2 <= lam + tol
    if nu is not None and lambdamin is not None:
        passed = passed and lambdamin >= nu - tol
    return CertificateRow(
        link=table.poset.label(x),
        level=table.poset.rank(x),
        lambda2=lambda2,
        lambdamin=lambdamin,
        connected=is_connected(link.poset, link.weights),
        passed=passed,
    )


def link_rows(
    poset: GradedPoset,
    weights: WeightScheme,
    lam: float,
    nu: Optional[float] = None,
    tol: float = CERTIFICATE_TOLERANCE,
    table: Optional[LinkTable] = None,
    jobs: int = 1,
) -> list[CertificateRow]:
    """Evidence rows for every x in P(<= d-2), in element order."""
    table = table or LinkTable(poset, weights)
    elements = [x for k in range(-1, poset.d - 1) for x in poset.level(k)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(lambda x: _link_row(table, x, nu, lam, tol), elements))
    return [_link_row(table, x, nu, lam, tol) for x in elements]


@timed_operation("certify_one_sided")
def certify_one_sided(
    poset: GradedPoset,
    weights: WeightScheme,
    lam: float,
    tol: float = CERTIFICATE_TOLERANCE,
    table: Optional[LinkTable] = None,
    jobs: int = 1,
) -> ExpansionCertificate:
    """
    One-sided lambda-local spectral expansion: every link adjacency has lambda_2 <= lam.

    Raises:
        NonStandardSchemeError: If the weight scheme is not standard.
    """
    _require_standard(poset, weights)
    rows = link_rows(poset, weights, lam, None, tol, table, jobs)
    certificate = ExpansionCertificate(
        kind=CertificateKind.ONE_SIDED,
        params={"lambda": lam},
        rows=rows,
        verdict=all(row.passed for row in rows),
    )
    _log_verdict(certificate)
    return certificate


@timed_operation("certify_two_sided")
def certify_two_sided(
    poset: GradedPoset,
    weights: WeightScheme,
    nu: float,
    lam: float,
    tol: float = CERTIFICATE_TOLERANCE,
    table: Optional[LinkTable] = None,
    jobs: int = 1,
) -> ExpansionCertificate:
    """
    Two-sided [nu, lam]-local spectral expansion.

    Raises:
        NonStandardSchemeError: If the weight scheme is not standard.
    """
    _require_standard(poset, weights)
    rows = link_rows(poset, weights, lam, nu, tol, table, jobs)
    certificate = ExpansionCertificate(
        kind=CertificateKind.TWO_SIDED,
        params={"nu": nu, "lambda": lam},
        rows=rows,
        verdict=all(row.passed for row in rows),
    )
    _log_verdict(certificate)
    return certificate


def measured_two_sided(
    poset: GradedPoset, weights: WeightScheme, table: Optional[LinkTable] = None
) -> tuple[float, float]:
    """Exact (nu, lam): extremes of the nontrivial link adjacency eigenvalues."""
    rows = link_rows(poset, weights, lam=1.0, table=table)
    highs = [row.lambda2 for row in rows if row.lambda2 is not None]
    lows = [row.lambdamin for row in rows if row.lambdamin is not None]
    return (min(lows, default=0.0), max(highs, default=0.0))


def _residual_op(
    poset: GradedPoset,
    weights: WeightScheme,
    upper: LinearOp,
    lower: LinearOp,
    r: float,
    delta: float,
    j: int,
) -> LinearOp:
    matrix = upper.matrix - delta * lower.matrix - r * np.eye(len(upper.matrix))
    return LinearOp(f"R_{j}", j, j, matrix, poset, weights)


def fit_eposet_constants(upper: LinearOp, lower: LinearOp) -> tuple[float, float]:
    """
    Least-squares (r, delta) minimizing the Frobenius norm of S+ - delta S- - r Id.

    S+- are the symmetrized walks, so the fit respects the weighted inner product.
    """
    s_up = upper.symmetrized()
    s_down = lower.symmetrized()
    design = np.column_stack([np.eye(len(s_up)).ravel(), s_down.ravel()])
    (r, delta), *_ = np.linalg.lstsq(design, s_up.ravel(), rcond=None)
    return float(r), float(delta)


def regular_eposet_constants(report: RegularityReport, j: int) -> Optional[tuple[float, float]]:
    """(r_j, delta_j) = (1/N, 1 - 1/N) with N = N^low_(j+1), when lower regular there."""
    n_low = report.n_low.get(j + 1)
    if n_low is None:
        return None
    return 1.0 / n_low, 1.0 - 1.0 / n_low


@timed_operation("certify_eposet")
def certify_eposet(
    poset: GradedPoset,
    weights: WeightScheme,
    lam: float,
    constants: Optional[Mapping[int, tuple[float, float]]] = None,
    regularity: Optional[RegularityReport] = None,
    tol: float = CERTIFICATE_TOLERANCE,
) -> ExpansionCertificate:
    """
    Global eposet certificate: ||D_(j+1) U_j - delta_j U_(j-1) D_j - r_j Id|| <= lam.

    Args:
        poset: Graded poset of rank d >= 2.
        weights: Weight scheme.
        lam: Claimed bound on every residual norm.
        constants: ``{j: (r_j, delta_j)}`` for j = 1..d-1; fitted when omitted,
            in which case the regular constants are evaluated too when the
            poset is lower regular.
        regularity: Precomputed regularity report.
        tol: Slack added to ``lam``.

    Raises:
        BadRankError: If d < 2.
    """
    if poset.d < 2:
        raise BadRankError(message="The eposet certificate needs rank d >= 2", level=poset.d)
    rows: list[EposetRow] = []
    for j in range(1, poset.d):
        upper = up_down_walk(poset, weights, j)
        lower = down_up_walk(poset, weights, j)
        candidates: list[tuple[ConstantsSource, float, float]] = []
        if constants is not None:
            r, delta = constants[j]
            candidates.append((ConstantsSource.SUPPLIED, r, delta))
        else:
            r, delta = fit_eposet_constants(upper, lower)
            candidates.append((ConstantsSource.FITTED, r, delta))
            regularity = regularity or detect_regularity(poset)
            regular = regular_eposet_constants(regularity, j)
            if regular is not None:
                candidates.append((ConstantsSource.REGULAR, *regular))
        for source, r, delta in candidates:
            norm = weighted_operator_norm(
                _residual_op(poset, weights, upper, lower, r, delta, j)
            )
            rows.append(EposetRow(j, r, delta, norm, source, norm <= lam + tol))
            logger.debug(
                f"Eposet level {j} ({source.value}): r={r:.6g} delta={delta:.6g} norm={norm:.3e}"
            )
    certificate = ExpansionCertificate(
        kind=CertificateKind.EPOSET,
        params={
            "lambda": lam,
            "constants": (
                ConstantsSource.SUPPLIED if constants is not None else ConstantsSource.FITTED
            ).value,
        },
        rows=rows,
        verdict=all(row.passed for row in rows),
    )
    _log_verdict(certificate)
    return certificate


def _log_verdict(certificate: ExpansionCertificate) -> None:
    if certificate.verdict:
        logger.info(f"{certificate.kind.value} certificate passed on {len(certificate.rows)} rows")
    else:
        failed = [
            getattr(row, "link", getattr(row, "level", "?")) for row in certificate.violations()
        ]
        logger.info(f"{certificate.kind.value} certificate failed at {failed}")
