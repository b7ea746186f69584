"""
Up-norm decomposition of mean-zero cochains and the bound on M+_k it yields.

A mean-zero f in C^k splits as h_k + U g'' with h_k in ker D_k; the pulled
back g'' is transported to g_(k-1) = sqrt(M+_(k-1)) g'' and the split repeats
down to level 0. The norms add up exactly and the up-norm of every g_j is a
combination of the ||h_i||^2 and of correction terms with coefficients a, b
and, for approximate UL, e.
"""

import logging
from typing import Mapping, Optional, Sequence

import numpy as np
import scipy.linalg

from ..constructors.qanalog import q_integer
from ..core.links import LinkTable
from ..exceptions import BadArgumentsError, BadRankError, NotMeanZeroError
from ..models.poset import GradedPoset, WeightScheme
from ..models.reports import BoundCheck, DecompositionResult, RegularityReport, ULLevel, ULReport
from ..operators.walks import up_down_walk, up_operator
from ..performance import timed_operation
from ..properties.weight_properties import check_UL
from ..spectral.eigen import restricted_top_eigenvalue
from .localization import correction_term, link_upper_extremes, link_walks

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10
SQRT_CLAMP = 1e-12
MEAN_TOLERANCE = 1e-9
BOUND_TOLERANCE = 1e-9

Table = dict[tuple[int, int], float]


# ============================================================================
# Coefficient tables
# ============================================================================

def _ratio(level: ULLevel, alpha: float) -> float:
    return (1.0 - alpha) / level.c_dia


def _diagonal(level: ULLevel, alpha: float) -> float:
    return alpha / level.c_dia - level.c_sqr * (level.c_xyz / level.c_dia - 1.0)


def coefficient_tables(
    levels: Mapping[int, ULLevel], alphas: Sequence[float], k: int
) -> tuple[Table, Table, Table]:
    """
    The a, b and e tables for 0 <= i <= j <= k by their recursions.

    a_{j,j} = alpha_j/c_dia_j - c_sqr_j (c_xyz_j/c_dia_j - 1), b_{j,j} = 1/c_dia_j and
    e_{j,j} = (1 + c_xyz_j - c_dia_j)/c_dia_j; below the diagonal each entry is
    (1 - alpha_j)/c_dia_j times the entry of row j-1, and a adds a_{j,j}.
    """
    a: Table = {}
    b: Table = {}
    e: Table = {}
    for j in range(0, k + 1):
        level = levels[j]
        ratio = _ratio(level, alphas[j])
        diagonal = _diagonal(level, alphas[j])
        for i in range(0, j):
            a[(j, i)] = ratio * a[(j - 1, i)] + diagonal
            b[(j, i)] = ratio * b[(j - 1, i)]
            e[(j, i)] = ratio * e[(j - 1, i)]
        a[(j, j)] = diagonal
        b[(j, j)] = 1.0 / level.c_dia
        e[(j, j)] = (1.0 + level.c_xyz - level.c_dia) / level.c_dia
    return a, b, e


def closed_form_tables(
    levels: Mapping[int, ULLevel], alphas: Sequence[float], k: int
) -> tuple[Table, Table, Table]:
    """
    Products solving the recursions when 1/c_dia - c_sqr (c_xyz/c_dia - 1) = 1.

    a_{l,r} = 1 - prod_{j=r..l} rho_j and b_{l,r} = prod_{j=r+1..l} rho_j / c_dia_r
    with rho_j = (1 - alpha_j)/c_dia_j; e is scaled the same way as b.
    """
    rho = {j: _ratio(levels[j], alphas[j]) for j in range(0, k + 1)}
    a: Table = {}
    b: Table = {}
    e: Table = {}
    for l in range(0, k + 1):
        for r in range(0, l + 1):
            tail = float(np.prod([rho[j] for j in range(r + 1, l + 1)]))
            a[(l, r)] = 1.0 - rho[r] * tail
            b[(l, r)] = tail / levels[r].c_dia
            e[(l, r)] = tail * (1.0 + levels[r].c_xyz - levels[r].c_dia) / levels[r].c_dia
    return a, b, e


def lazy_choice(regularity: RegularityReport, k: int) -> tuple[float, ...]:
    """alpha_j = 1/N^mid_j for j = 0..k."""
    missing = [j for j in range(0, k + 1) if regularity.n_mid.get(j) is None]
    if missing:
        raise BadArgumentsError(
            message="The lazy choice needs middle regularity",
            details={"levels": missing},
        )
    return tuple(1.0 / regularity.n_mid[j] for j in range(0, k + 1))  # type: ignore[operator]


def lazy_tables(regularity: RegularityReport, k: int) -> tuple[Table, Table]:
    """
    a and b in structure constants under the lazy choice.

    a_{l,r} = 1 - (N^low_r/N^low_(l+1)) prod_{j=r..l} (N^mid_j - 1)/N^wedge_j and
    b_{l,r} = N^low_r N^mid_r/(N^low_(l+1) N^wedge_r) prod_{j=r+1..l} (N^mid_j - 1)/N^wedge_j.
    """
    n_low, n_mid, n_wedge = regularity.n_low, regularity.n_mid, regularity.n_wedge
    if not regularity.is_regular:
        raise BadArgumentsError(message="Lazy closed forms need a regular poset")

    def factor(j: int) -> float:
        return (n_mid[j] - 1) / n_wedge[j]  # type: ignore[operator]

    a: Table = {}
    b: Table = {}
    for l in range(0, k + 1):
        for r in range(0, l + 1):
            tail = float(np.prod([factor(j) for j in range(r + 1, l + 1)]))
            a[(l, r)] = 1.0 - n_low[r] / n_low[l + 1] * factor(r) * tail  # type: ignore[operator]
            b[(l, r)] = (
                n_low[r] * n_mid[r] / (n_low[l + 1] * n_wedge[r]) * tail  # type: ignore[operator]
            )
    return a, b


def simplicial_up_bound(k: int, lam: float) -> float:
    """(k+1)/(k+2) + ((k+1)/2) lam for complexes with lam-expanding links."""
    return (k + 1) / (k + 2) + (k + 1) / 2 * lam


def grassmannian_up_bound(k: int, q: int, lam: float) -> float:
    """[k+1]_q/[k+2]_q + S(k, q) lam with S(k, q) = sum_i q^(k-i+1) [i+1]_q/[k+2]_q."""
    top = q_integer(k + 2, q)
    spread = sum(q ** (k - i + 1) * q_integer(i + 1, q) / top for i in range(0, k + 1))
    return q_integer(k + 1, q) / top + spread * lam


# ============================================================================
# Construction
# ============================================================================

def _check(poset: GradedPoset, k: int, alphas: Sequence[float]) -> None:
    if not 0 <= k <= poset.d - 1:
        raise BadRankError(message=f"The decomposition needs 0 <= k <= {poset.d - 1}", level=k)
    if len(alphas) != k + 1:
        raise BadArgumentsError(
            message=f"Expected {k + 1} alphas (levels 0..{k}), got {len(alphas)}",
            details={"alphas": list(alphas)},
        )


def _sym_up(poset: GradedPoset, weights: WeightScheme, j: int) -> np.ndarray:
    """W_(j+1)^(1/2) U_j W_j^(-1/2); its transpose is the symmetrized D_(j+1)."""
    up = up_operator(poset, weights, j)
    target = np.sqrt(up.target_context.m)
    source = np.sqrt(up.source_context.m)
    return (up.matrix * target[:, None]) / source[None, :]


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = scipy.linalg.eigh((matrix + matrix.T) / 2)
    values = np.where((values < 0) & (values >= -SQRT_CLAMP), 0.0, values)
    return (vectors * np.sqrt(np.maximum(values, 0.0))) @ vectors.T


@timed_operation("ko_decomposition")
def ko_decomposition(
    poset: GradedPoset,
    weights: WeightScheme,
    k: int,
    alphas: Sequence[float],
    f: np.ndarray,
    ul_report: Optional[ULReport] = None,
    table: Optional[LinkTable] = None,
) -> DecompositionResult:
    """
    Decompose a mean-zero f in C^k into h_0..h_k and transported g_0..g_k.

    Vectors are returned in the original coordinates; ``h_norms_sq`` holds
    their weighted squared norms. For k = 0 the only term is h_0 = f.

    Raises:
        NotMeanZeroError: If <f, 1> is not zero.
        BadRankError: Unless 0 <= k <= d-1.
        BadArgumentsError: If ``alphas`` does not have k+1 entries.
    """
    _check(poset, k, alphas)
    f = np.asarray(f, dtype=float)
    masses = weights.level_masses(poset, k)
    norm = float(np.sqrt(np.dot(masses * f, f)))
    mean = float(np.dot(masses, f))
    if abs(mean) > MEAN_TOLERANCE * max(1.0, norm):
        raise NotMeanZeroError(
            message="The decomposition needs a mean-zero cochain",
            level=k,
            details={"mean": mean},
        )
    ul_report = ul_report or check_UL(poset, weights)
    a, b, e = coefficient_tables(ul_report.levels, alphas, k)
    result = DecompositionResult(k=k, alphas=tuple(alphas), a=a, b=b, e=e)
    table = table or LinkTable(poset, weights)

    current = np.sqrt(masses) * f
    symmetric: dict[int, np.ndarray] = {k: current}
    h_sym: dict[int, np.ndarray] = {}
    for j in range(k, 0, -1):
        sym_up = _sym_up(poset, weights, j - 1)
        kernel = scipy.linalg.null_space(sym_up.T, rcond=RANK_TOLERANCE)
        h_sym[j] = kernel @ (kernel.T @ current)
        pulled, *_ = np.linalg.lstsq(sym_up, current - h_sym[j], rcond=None)
        current = _psd_sqrt(sym_up.T @ sym_up) @ pulled
        symmetric[j - 1] = current
    h_sym[0] = symmetric[0]

    for j in range(0, k + 1):
        scale = np.sqrt(weights.level_masses(poset, j))
        result.h[j] = h_sym[j] / scale
        result.g[j] = symmetric[j] / scale
        result.h_norms_sq[j] = float(np.dot(h_sym[j], h_sym[j]))

    for i in range(0, k + 1):
        walks = link_walks(table, i)
        g_i = result.g[i]
        result.corrections[i] = correction_term(walks, g_i, g_i, alphas[i])
        _, mu = link_upper_extremes(table, i - 1)
        excess = max((mu if mu is not None else alphas[i]) - alphas[i], 0.0)
        result.correction_bounds[i] = excess * float(np.dot(symmetric[i], symmetric[i]))

    for j in range(0, k + 1):
        g_norm = float(np.dot(symmetric[j], symmetric[j]))
        result.norm_residuals[j] = abs(g_norm - sum(result.h_norms_sq[i] for i in range(j + 1)))
        up = up_operator(poset, weights, j)
        up_norm = up.target_context.inner(up.matrix @ result.g[j], up.matrix @ result.g[j])
        predicted = sum(
            a[(j, i)] * result.h_norms_sq[i] + b[(j, i)] * result.corrections[i]
            for i in range(0, j + 1)
        )
        result.up_norm_residuals[j] = abs(up_norm - predicted)
    logger.debug(
        f"Decomposition at k={k}: norm residual {result.max_norm_residual:.3e}, "
        f"up-norm residual {result.max_up_norm_residual:.3e}"
    )
    return result


# ============================================================================
# Bound on the top nontrivial eigenvalue of M+_k
# ============================================================================

@timed_operation("bound_up_norm")
def bound_up_norm(
    poset: GradedPoset,
    weights: WeightScheme,
    k: int,
    alphas: Sequence[float],
    ul_report: Optional[ULReport] = None,
    table: Optional[LinkTable] = None,
    tol: float = BOUND_TOLERANCE,
) -> BoundCheck:
    """
    Compare max_j a_{k,j} + sum_i b_{k,i} (mu'_(i-1) - alpha_i)_+ (+ sum_i e_{k,i} eps_i
    under approximate UL) with lambda_max(M+_k) on mean-zero cochains.

    Raises:
        MissingULReportError: If UL constants are missing for some level <= k.
    """
    _check(poset, k, alphas)
    ul_report = ul_report or check_UL(poset, weights)
    levels = {j: ul_report.level(j) for j in range(0, k + 1)}
    a, b, e = coefficient_tables(levels, alphas, k)
    table = table or LinkTable(poset, weights)

    mu_primes: dict[int, Optional[float]] = {}
    excess = 0.0
    for i in range(0, k + 1):
        _, mu = link_upper_extremes(table, i - 1)
        mu_primes[i - 1] = mu
        if mu is not None:
            excess += b[(k, i)] * max(mu - alphas[i], 0.0)
    bound = max(a[(k, j)] for j in range(0, k + 1)) + excess
    approximation = 0.0
    if not ul_report.exact:
        approximation = sum(e[(k, i)] * levels[i].eps for i in range(0, k + 1))
        bound += approximation

    truth = restricted_top_eigenvalue(up_down_walk(poset, weights, k))
    verdict = truth is None or bound >= truth - tol
    logger.info(f"Up-norm bound at k={k}: {bound:.6g} vs lambda_max {truth}")
    return BoundCheck(
        theorem="up_norm_bound",
        bound=bound,
        measured=truth,
        verdict=verdict,
        details={
            "k": k,
            "alphas": list(alphas),
            "mu_prime": mu_primes,
            "approximation": approximation,
            "exact_ul": ul_report.exact,
        },
    )
