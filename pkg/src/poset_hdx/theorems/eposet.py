"""
Eposet side: near-eigenvalue tables, the decomposition along U^(l-i)(ker D_i),
injectivity of U_j and the two directions of the eposet / two-sided equivalence.
"""

import logging
from itertools import combinations
from typing import Mapping, Optional

import numpy as np
import scipy.linalg

from ..core.links import LinkTable
from ..exceptions import BadRankError, HypothesisLedger, NotInjectiveError
from ..models.enums import ConstantsSource
from ..models.poset import GradedPoset, WeightScheme
from ..models.reports import ALReport, BoundCheck, EposetDecomposition, RegularityReport
from ..operators.linear import InnerProductContext, LinearOp
from ..operators.walks import down_operator, down_up_walk, up_down_walk, up_operator
from ..performance import timed_operation
from ..properties.regularity import detect_regularity
from ..properties.weight_properties import check_AL
from ..spectral.certificates import (
    fit_eposet_constants,
    link_rows,
    regular_eposet_constants,
)
from ..spectral.eigen import weighted_operator_norm, weighted_spectrum

logger = logging.getLogger(__name__)

INJECTIVITY_TOLERANCE = 1e-9
RANK_TOLERANCE = 1e-10
BOUND_TOLERANCE = 1e-9

Constants = Mapping[int, tuple[float, float]]


# ============================================================================
# r tables
# ============================================================================

def r_table(r: Mapping[int, float], delta: Mapping[int, float], l: int) -> dict[int, float]:
    """
    r^l_i = r_l + sum_{j=l-i+1..l-1} (prod_{h=j+1..l} delta_h) r_j for i = 1..l+1.

    ``r`` must hold r_0..r_l and ``delta`` delta_0..delta_l. The entry i = l+2
    belongs to the constants, on which DU acts as the identity, and is always 1.
    """
    table: dict[int, float] = {}
    for i in range(1, l + 2):
        total = r[l]
        for j in range(l - i + 1, l):
            total += float(np.prod([delta[h] for h in range(j + 1, l + 1)])) * r[j]
        table[i] = total
    table[l + 2] = 1.0
    return table


def simplicial_r_table(l: int) -> dict[int, float]:
    """r^l_i = i/(l+2) for complete complexes."""
    return {i: i / (l + 2) for i in range(1, l + 3)}


def grassmannian_r_table(l: int, q: int) -> dict[int, float]:
    """r^l_i = 1 - prod_{j=l-i+1..l} (1 - r_j) with r_j = (q-1)/(q^(j+2)-1)."""
    rates = {j: (q - 1) / (q ** (j + 2) - 1) for j in range(-1, l + 1)}
    return {
        i: 1.0 - float(np.prod([1.0 - rates[j] for j in range(l - i + 1, l + 1)]))
        for i in range(1, l + 3)
    }


def resolve_constants(
    poset: GradedPoset,
    weights: WeightScheme,
    l: int,
    constants: Optional[Constants] = None,
    regularity: Optional[RegularityReport] = None,
) -> tuple[dict[int, tuple[float, float]], dict[int, ConstantsSource]]:
    """
    (r_j, delta_j) for j = 0..l with r_(-1) = 1: supplied, else regular, else fitted.
    """
    regularity = regularity or detect_regularity(poset, local=False)
    resolved: dict[int, tuple[float, float]] = {-1: (1.0, 0.0)}
    sources: dict[int, ConstantsSource] = {}
    for j in range(0, l + 1):
        if constants is not None and j in constants:
            resolved[j] = tuple(constants[j])  # type: ignore[assignment]
            sources[j] = ConstantsSource.SUPPLIED
            continue
        regular = regular_eposet_constants(regularity, j)
        if regular is not None:
            resolved[j] = regular
            sources[j] = ConstantsSource.REGULAR
        else:
            resolved[j] = fit_eposet_constants(
                up_down_walk(poset, weights, j), down_up_walk(poset, weights, j)
            )
            sources[j] = ConstantsSource.FITTED
    return resolved, sources


def eposet_residual(
    poset: GradedPoset, weights: WeightScheme, j: int, r: float, delta: float
) -> float:
    """Weighted operator norm of M+_j - delta M-_j - r Id."""
    upper = up_down_walk(poset, weights, j)
    lower = down_up_walk(poset, weights, j)
    matrix = upper.matrix - delta * lower.matrix - r * np.eye(len(upper.matrix))
    return weighted_operator_norm(LinearOp(f"R_{j}", j, j, matrix, poset, weights))


# ============================================================================
# Injectivity
# ============================================================================

def _sym_up(poset: GradedPoset, weights: WeightScheme, j: int) -> np.ndarray:
    up = up_operator(poset, weights, j)
    target = np.sqrt(up.target_context.m)
    source = np.sqrt(up.source_context.m)
    return (up.matrix * target[:, None]) / source[None, :]


def smallest_singular_value(poset: GradedPoset, weights: WeightScheme, j: int) -> float:
    """Smallest singular value of U_j in the weighted norms; 0 when U_j cannot be injective."""
    matrix = _sym_up(poset, weights, j)
    if matrix.shape[0] < matrix.shape[1]:
        return 0.0
    return float(scipy.linalg.svdvals(matrix)[-1])


def verify_injectivity(
    poset: GradedPoset,
    weights: WeightScheme,
    j: int,
    r: float,
    delta: float,
    mu: Optional[float] = None,
    tol: float = BOUND_TOLERANCE,
) -> BoundCheck:
    """
    When mu < r_j, <U_j f, U_j f> >= (r_j - mu) ||f||^2, read off lambda_min(M+_j).

    ``mu`` defaults to the measured residual norm at level j.
    """
    if not 0 <= j <= poset.d - 1:
        raise BadRankError(message=f"Injectivity is checked for 0 <= j <= {poset.d - 1}", level=j)
    if mu is None:
        mu = eposet_residual(poset, weights, j, r, delta)
    if mu >= r:
        return BoundCheck.skipped("injectivity", "mu >= r_j", j=j, mu=mu, r=r)
    smallest = weighted_spectrum(up_down_walk(poset, weights, j), deflate=False).lambda_min
    return BoundCheck(
        theorem="injectivity",
        bound=r - mu,
        measured=smallest,
        verdict=smallest >= r - mu - tol,
        details={"j": j, "r": r, "delta": delta, "mu": mu},
    )


# ============================================================================
# Decomposition
# ============================================================================

def _subspace_bases(
    poset: GradedPoset, weights: WeightScheme, l: int
) -> dict[int, np.ndarray]:
    """Orthonormal bases (in original coordinates) of U^(l+1)(C^-1) and U^(l-i)(ker D_i)."""
    ups = {j: up_operator(poset, weights, j).matrix for j in range(-1, l)}

    def lift(basis: np.ndarray, start: int) -> np.ndarray:
        for j in range(start, l):
            basis = ups[j] @ basis
        return basis

    bases = {-1: scipy.linalg.orth(lift(np.ones((1, 1)), -1), rcond=RANK_TOLERANCE)}
    for i in range(0, l + 1):
        kernel = scipy.linalg.null_space(
            down_operator(poset, weights, i).matrix, rcond=RANK_TOLERANCE
        )
        if kernel.shape[1] == 0:
            bases[i] = np.zeros((poset.level_size(l), 0))
            continue
        bases[i] = scipy.linalg.orth(lift(kernel, i), rcond=RANK_TOLERANCE)
    return bases


@timed_operation("eposet_decomposition")
def eposet_decomposition(
    poset: GradedPoset,
    weights: WeightScheme,
    l: int,
    f: np.ndarray,
    constants: Optional[Constants] = None,
    regularity: Optional[RegularityReport] = None,
) -> EposetDecomposition:
    """
    Split f in C^l into f_(-1) + f_0 + ... + f_l with f_i in U^(l-i)(ker D_i).

    Orthogonality defects are cosines of the weighted angles between
    components; near-eigenvalue residuals are ||M+_l f_i - r^l_(l-i+1) f_i||.
    Neither is judged, both are reported.

    Raises:
        BadRankError: Unless 0 <= l <= d-1.
        NotInjectiveError: If some U_j with j < l has a kernel or the subspaces
            do not span C^l independently.
    """
    if not 0 <= l <= poset.d - 1:
        raise BadRankError(message=f"The decomposition needs 0 <= l <= {poset.d - 1}", level=l)
    for j in range(-1, l):
        sigma = smallest_singular_value(poset, weights, j)
        if sigma <= INJECTIVITY_TOLERANCE:
            raise NotInjectiveError(
                message=f"U_{j} is not injective; the decomposition is not unique",
                level=j,
                details={"sigma_min": sigma},
            )
    bases = _subspace_bases(poset, weights, l)
    order = sorted(bases)
    stacked = np.hstack([bases[i] for i in order])
    size = poset.level_size(l)
    if stacked.shape[1] != size or np.linalg.matrix_rank(stacked, tol=RANK_TOLERANCE) < size:
        raise NotInjectiveError(
            message="The subspaces U^(l-i)(ker D_i) do not decompose C^l",
            level=l,
            details={"columns": stacked.shape[1], "size": size},
        )
    f = np.asarray(f, dtype=float)
    coefficients = np.linalg.solve(stacked, f)

    result = EposetDecomposition(level=l)
    context = InnerProductContext.of(poset, weights, l)
    offset = 0
    for i in order:
        width = bases[i].shape[1]
        result.components[i] = bases[i] @ coefficients[offset : offset + width]
        result.component_norms_sq[i] = context.inner(result.components[i], result.components[i])
        offset += width
    result.reconstruction_residual = float(np.max(np.abs(sum(result.components.values()) - f)))

    for a, b in combinations(order, 2):
        na = context.norm(result.components[a])
        nb = context.norm(result.components[b])
        inner = context.inner(result.components[a], result.components[b])
        cosine = inner / (na * nb) if na and nb else 0.0
        result.orthogonality[(a, b)] = abs(cosine)

    resolved, _ = resolve_constants(poset, weights, l, constants, regularity)
    r = {j: v[0] for j, v in resolved.items()}
    delta = {j: v[1] for j, v in resolved.items() if j >= 0}
    result.r_table = r_table(r, delta, l)
    upper = up_down_walk(poset, weights, l).matrix
    for i in order:
        component = result.components[i]
        target = result.r_table[l - i + 1]
        result.eigen_residuals[i] = context.norm(upper @ component - target * component)
    logger.debug(
        f"Eposet decomposition at l={l}: reconstruction {result.reconstruction_residual:.3e}, "
        f"largest defect {max(result.orthogonality.values(), default=0.0):.3e}"
    )
    return result


# ============================================================================
# Equivalence with two-sided local expansion
# ============================================================================

@timed_operation("eposet_from_two_sided")
def eposet_from_two_sided(
    poset: GradedPoset,
    weights: WeightScheme,
    regularity: Optional[RegularityReport] = None,
    al_report: Optional[ALReport] = None,
    table: Optional[LinkTable] = None,
    tol: float = BOUND_TOLERANCE,
) -> BoundCheck:
    """
    Two-sided lambda-expanding links give residuals
    ||M+_l - (1 - r) M-_l - r Id|| <= (1 - 1/N^low_(l+1)) lambda with r = 1/N^low_(l+1).

    Raises:
        HypothesisError: Unless standard, lower regular and AL exact.
    """
    ledger = HypothesisLedger("eposet_from_two_sided")
    standard = ledger.require(weights.is_standard(poset), "standard weight scheme")
    regularity = regularity or detect_regularity(poset, local=False)
    ledger.require(regularity.lower_regular, "lower regular")
    if standard:
        al_report = al_report or check_AL(poset, weights)
        ledger.require(al_report.exact, "exact property AL")
    ledger.raise_if_unmet()

    rows = link_rows(poset, weights, lam=1.0, table=table)
    two_sided = [
        max(abs(row.lambda2), abs(row.lambdamin))
        for row in rows
        if row.lambda2 is not None and row.lambdamin is not None
    ]
    lam = max(two_sided, default=0.0)
    levels: dict[int, dict[str, float]] = {}
    verdict = True
    for l in range(0, poset.d):
        n = regularity.n_low[l + 1]
        r = 1.0 / n  # type: ignore[operator]
        residual = eposet_residual(poset, weights, l, r, 1.0 - r)
        bound = (1.0 - r) * lam
        levels[l] = {"r": r, "residual": residual, "bound": bound}
        verdict = verdict and residual <= bound + tol
    return BoundCheck(
        theorem="eposet_from_two_sided",
        bound=max(v["bound"] for v in levels.values()),
        measured=max(v["residual"] for v in levels.values()),
        verdict=verdict,
        details={"lambda": lam, "levels": levels},
    )


def at_most_one_common_cover(poset: GradedPoset) -> bool:
    """Whether every pair of distinct elements of one rank has at most one common cover."""
    for k in range(0, poset.d):
        for x, y in combinations(poset.level(k), 2):
            if len(poset.common_parents(x, y)) > 1:
                return False
    return True


@timed_operation("two_sided_from_eposet")
def two_sided_from_eposet(
    poset: GradedPoset,
    weights: WeightScheme,
    regularity: Optional[RegularityReport] = None,
    constants: Optional[Constants] = None,
    table: Optional[LinkTable] = None,
    tol: float = BOUND_TOLERANCE,
) -> BoundCheck:
    """
    A mu-eposet in which two elements share at most one cover has two-sided
    link spectra bounded by 2 max_l {(1 + 1/(N^low_(l+1) - 1)) N^low_l} mu.

    Skipped when some pair shares two covers or the poset is not lower regular.
    """
    if not at_most_one_common_cover(poset):
        return BoundCheck.skipped("two_sided_from_eposet", "some pair shares two covers")
    regularity = regularity or detect_regularity(poset, local=False)
    if not regularity.lower_regular or any(
        regularity.n_low[l + 1] < 2 for l in range(0, poset.d)  # type: ignore[operator]
    ):
        return BoundCheck.skipped("two_sided_from_eposet", "not lower regular with N^low >= 2")
    resolved, _ = resolve_constants(poset, weights, poset.d - 1, constants, regularity)
    mu = max(eposet_residual(poset, weights, l, *resolved[l]) for l in range(0, poset.d))
    factor = max(
        (1.0 + 1.0 / (regularity.n_low[l + 1] - 1)) * regularity.n_low[l]  # type: ignore[operator]
        for l in range(0, poset.d)
    )
    bound = 2.0 * factor * mu
    rows = link_rows(poset, weights, lam=1.0, table=table)
    measured = max(
        (
            max(abs(row.lambda2), abs(row.lambdamin))
            for row in rows
            if row.lambda2 is not None and row.lambdamin is not None
        ),
        default=0.0,
    )
    return BoundCheck(
        theorem="two_sided_from_eposet",
        bound=bound,
        measured=measured,
        verdict=measured <= bound + tol,
        details={"mu": mu, "factor": factor},
    )
