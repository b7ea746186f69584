"""
Localization identities checked on seeded random cochains.

Every verifier draws ``trials`` pairs of Gaussian cochains from one seeded
generator, evaluates both sides of an identity and reports the largest
residual relative to max(1, |lhs|). Links are taken from a shared LinkTable.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..core.links import LinkTable, restrict
from ..exceptions import (
    BadRankError,
    HypothesisLedger,
    MissingULReportError,
    NonStandardSchemeError,
    PropertyViolationError,
)
from ..models.poset import Cochain, GradedPoset, Link, WeightScheme
from ..models.reports import ALReport, ResidualReport, TLReport, ULReport
from ..operators.linear import InnerProductContext, LinearOp
from ..operators.walks import (
    adjacency_operator,
    down_operator,
    down_up_walk,
    hat_localize,
    up_down_walk,
    up_operator,
)
from ..performance import timed_operation
from ..properties.weight_properties import check_AL, check_TL
from ..spectral.eigen import weighted_spectrum

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 100
DEFAULT_SEED = 20240601
IDENTITY_TOLERANCE = 1e-9


def _relative(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def _draw(rng: np.random.Generator, poset: GradedPoset, level: int) -> np.ndarray:
    return rng.standard_normal(poset.level_size(level))


@dataclass(frozen=True, eq=False)
class LocalView:
    """A link seen from one parent level: its inner product and the link operators needed."""
    link: Link
    parent_level: int
    context: InnerProductContext
    operator: Optional[LinearOp] = None

    def localize(self, values: np.ndarray) -> np.ndarray:
        return restrict(self.link, values, self.parent_level)


def _views(
    table: LinkTable,
    base_rank: int,
    parent_level: int,
    build: Optional[Callable[[Link, int], LinearOp]] = None,
) -> list[tuple[float, LocalView]]:
    """(m(x), view) for every x of ``base_rank``, with an optional link operator."""
    views = []
    weights = table.weights
    for link in table.links_at(base_rank):
        level = link.link_level(parent_level)
        context = InnerProductContext.of(link.poset, link.weights, level)
        operator = build(link, level) if build is not None else None
        view = LocalView(link, parent_level, context, operator)
        views.append((float(weights.m[link.base]), view))
    return views


def _local_sum(
    views: list[tuple[float, LocalView]],
    f: np.ndarray,
    g: np.ndarray,
    form: Callable[[LocalView, np.ndarray, np.ndarray], float],
) -> float:
    return sum(mass * form(view, view.localize(f), view.localize(g)) for mass, view in views)


def _report(
    name: str,
    residuals: dict[str, float],
    trials: int,
    seed: int,
    tol: float,
    **details,
) -> ResidualReport:
    worst = max(residuals.values(), default=0.0)
    report = ResidualReport(
        name=name,
        max_residual=worst,
        trials=trials,
        seed=seed,
        tolerance=tol,
        passed=worst <= tol,
        details={"residuals": residuals, **details},
    )
    logger.info(f"{name}: max residual {worst:.3e} over {trials} trials")
    return report


def _require_ul(ul_report: Optional[ULReport], l: int) -> None:
    if ul_report is None:
        raise MissingULReportError(
            message="Up-localization needs the UL constants of the poset", level=l
        )
    ul_report.level(l)


# ============================================================================
# Basic localization
# ============================================================================

@timed_operation("verify_basic_localization")
def verify_basic_localization(
    poset: GradedPoset,
    weights: WeightScheme,
    k: int,
    l: int,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    tol: float = IDENTITY_TOLERANCE,
    table: Optional[LinkTable] = None,
) -> ResidualReport:
    """
    Localization of the inner product and of the down operator to the links of P(k).

    <f, g> = sum over x in P(k) of m(x) <f_x, g_x>_x and
    <D_l f, D_l g> = sum over x in P(k) of m(x) <D_x f_x, D_x g_x>_x.

    Raises:
        BadRankError: Unless -1 <= k < l <= d.
    """
    if not -1 <= k < l <= poset.d:
        raise BadRankError(
            message=f"Basic localization needs -1 <= k < l <= {poset.d}",
            level=l,
            details={"k": k},
        )
    table = table or LinkTable(poset, weights)
    rng = np.random.default_rng(seed)
    context = InnerProductContext.of(poset, weights, l)
    down = down_operator(poset, weights, l)
    down_context = down.target_context
    views = _views(table, k, l, lambda link, level: down_operator(link.poset, link.weights, level))

    inner_worst = 0.0
    down_worst = 0.0
    for _ in range(trials):
        f = _draw(rng, poset, l)
        g = _draw(rng, poset, l)
        local_inner = _local_sum(views, f, g, lambda v, a, b: v.context.inner(a, b))
        inner_worst = max(inner_worst, _relative(context.inner(f, g), local_inner))
        global_down = down_context.inner(down.matrix @ f, down.matrix @ g)
        local_down = _local_sum(
            views,
            f,
            g,
            lambda v, a, b: v.operator.target_context.inner(  # type: ignore[union-attr]
                v.operator.matrix @ a, v.operator.matrix @ b  # type: ignore[union-attr]
            ),
        )
        down_worst = max(down_worst, _relative(global_down, local_down))
    return _report(
        "basic_localization",
        {"inner_product": inner_worst, "down": down_worst},
        trials,
        seed,
        tol,
        k=k,
        l=l,
    )


# ============================================================================
# Up localization (exact and approximate UL)
# ============================================================================

def _up_views(table: LinkTable, l: int) -> list[tuple[float, LocalView]]:
    return _views(table, l - 1, l, lambda link, level: up_operator(link.poset, link.weights, level))


def _local_up_form(view: LocalView, a: np.ndarray, b: np.ndarray) -> float:
    op = view.operator
    return op.target_context.inner(op.matrix @ a, op.matrix @ b)  # type: ignore[union-attr]


@timed_operation("verify_up_localization")
def verify_up_localization(
    poset: GradedPoset,
    weights: WeightScheme,
    l: int,
    ul_report: Optional[ULReport],
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    tol: float = IDENTITY_TOLERANCE,
    table: Optional[LinkTable] = None,
) -> ResidualReport:
    """
    Up-localization of <U_l f, U_l g> to the links of P(l-1).

    Under exact UL the residual of
    <U f, U g> = (1/c_dia) sum m(z) <U_z f_z, U_z g_z>_z - c_sqr (c_xyz/c_dia - 1) <f, g>
    is reported, together with the f = g = 1 case. Under approximate UL the
    defect is compared with two bounds: the one built from |f| and |g| and the
    unified eps (1 + |c_xyz - c_dia|)/c_dia ||f|| ||g||. The residual then
    reported is the largest excess of the defect over either bound.

    Raises:
        MissingULReportError: If no UL constants exist for level l.
        BadRankError: Unless 0 <= l <= d-1.
    """
    _require_ul(ul_report, l)
    if not 0 <= l <= poset.d - 1:
        raise BadRankError(message=f"Up-localization needs 0 <= l <= {poset.d - 1}", level=l)
    constants = ul_report.level(l)  # type: ignore[union-attr]
    c_xyz, c_dia, c_sqr = constants.c_xyz, constants.c_dia, constants.c_sqr
    table = table or LinkTable(poset, weights)
    rng = np.random.default_rng(seed)
    up = up_operator(poset, weights, l)
    context = up.source_context
    top = up.target_context
    views = _up_views(table, l)
    shift = c_sqr * (c_xyz / c_dia - 1.0)

    def predicted(f: np.ndarray, g: np.ndarray) -> float:
        return _local_sum(views, f, g, _local_up_form) / c_dia - shift * context.inner(f, g)

    def actual(f: np.ndarray, g: np.ndarray) -> float:
        return top.inner(up.matrix @ f, up.matrix @ g)

    exact = ul_report.exact  # type: ignore[union-attr]
    if exact:
        worst = 0.0
        for _ in range(trials):
            f = _draw(rng, poset, l)
            g = _draw(rng, poset, l)
            worst = max(worst, _relative(actual(f, g), predicted(f, g)))
        ones = np.ones(poset.level_size(l))
        residuals = {"identity": worst, "ones": abs(predicted(ones, ones) - 1.0)}
        return _report("up_localization", residuals, trials, seed, tol, l=l, exact=True)

    gap = abs(c_xyz - c_dia)
    plus = max(constants.eps_xyz - constants.eps_dia, 0.0)
    worst_rigorous = 0.0
    worst_unified = 0.0
    largest_defect = 0.0
    for _ in range(trials):
        f = _draw(rng, poset, l)
        g = _draw(rng, poset, l)
        defect = abs(actual(f, g) - predicted(f, g))
        largest_defect = max(largest_defect, defect)
        af, ag = np.abs(f), np.abs(g)
        rigorous = (
            constants.eps_dia * actual(af, ag)
            + (gap * constants.eps_sqr + plus * (c_sqr + constants.eps_sqr)) * context.inner(af, ag)
        ) / c_dia
        unified = constants.eps * (1.0 + gap) / c_dia * context.norm(f) * context.norm(g)
        worst_rigorous = max(worst_rigorous, defect - rigorous)
        worst_unified = max(worst_unified, defect - unified)
    residuals = {
        "rigorous_excess": max(worst_rigorous, 0.0),
        "unified_excess": max(worst_unified, 0.0),
    }
    return _report(
        "up_localization",
        residuals,
        trials,
        seed,
        tol,
        l=l,
        exact=False,
        eps=constants.eps,
        largest_defect=largest_defect,
    )


# ============================================================================
# Towards UD - DU and the correction term
# ============================================================================

@dataclass(frozen=True, eq=False)
class LinkWalks:
    """M+_{x,0}, M-_{x,0} and the level-0 inner product of one link."""
    mass: float
    link: Link
    parent_level: int
    context: InnerProductContext
    upper: np.ndarray
    lower: np.ndarray

    def correction(self, f: np.ndarray, g: np.ndarray, alpha: float, beta: float) -> float:
        a = restrict(self.link, f, self.parent_level)
        b = restrict(self.link, g, self.parent_level)
        shifted = self.upper - alpha * np.eye(len(a))
        return self.context.inner(a, shifted @ (b - beta * (self.lower @ b)))


def link_walks(table: LinkTable, l: int) -> list[LinkWalks]:
    """The level-0 walks of every link of P(l-1), viewed from level l."""
    walks = []
    for link in table.links_at(l - 1):
        walks.append(
            LinkWalks(
                mass=float(table.weights.m[link.base]),
                link=link,
                parent_level=l,
                context=InnerProductContext.of(link.poset, link.weights, 0),
                upper=up_down_walk(link.poset, link.weights, 0).matrix,
                lower=down_up_walk(link.poset, link.weights, 0).matrix,
            )
        )
    return walks


def correction_term(
    walks: list[LinkWalks], f: np.ndarray, g: np.ndarray, alpha: float, beta: float = 1.0
) -> float:
    """Sum over x of m(x) <f_x, (M+_{x,0} - alpha)(Id - beta M-_{x,0}) g_x>_x."""
    return sum(w.mass * w.correction(f, g, alpha, beta) for w in walks)


def link_upper_extremes(table: LinkTable, k: int) -> tuple[Optional[float], Optional[float]]:
    """
    (nu'_k, mu'_k): the smallest and largest nontrivial eigenvalues of M+_{x,0}
    over x in P(k). None when no link at rank k has a nontrivial part.
    """
    lows: list[float] = []
    highs: list[float] = []
    for link in table.links_at(k):
        summary = weighted_spectrum(up_down_walk(link.poset, link.weights, 0))
        if summary.nontrivial:
            highs.append(max(summary.nontrivial))
            lows.append(min(summary.nontrivial))
    if not highs:
        return None, None
    return min(lows), max(highs)


def _require_exact_ul(ul_report: Optional[ULReport], l: int, theorem: str) -> None:
    _require_ul(ul_report, l)
    ledger = HypothesisLedger(theorem)
    ledger.require(ul_report.exact, "exact property UL")  # type: ignore[union-attr]
    ledger.raise_if_unmet()


@timed_operation("verify_towards_ud_du")
def verify_towards_ud_du(
    poset: GradedPoset,
    weights: WeightScheme,
    l: int,
    ul_report: Optional[ULReport],
    alpha: float = 0.5,
    beta: float = 1.0,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    tol: float = IDENTITY_TOLERANCE,
    table: Optional[LinkTable] = None,
) -> ResidualReport:
    """
    c_dia <U f, U g> = beta (1 - alpha) <D f, D g> + (alpha - c_sqr (c_xyz - c_dia)) <f, g>
    + sum over x in P(l-1) of m(x) <f_x, (M+_{x,0} - alpha)(Id - beta M-_{x,0}) g_x>_x.

    Raises:
        MissingULReportError: If no UL constants exist for level l.
        HypothesisError: If UL is only approximate.
    """
    _require_exact_ul(ul_report, l, "towards_ud_du")
    if not 0 <= l <= poset.d - 1:
        raise BadRankError(message=f"The identity needs 0 <= l <= {poset.d - 1}", level=l)
    constants = ul_report.level(l)  # type: ignore[union-attr]
    table = table or LinkTable(poset, weights)
    walks = link_walks(table, l)
    up = up_operator(poset, weights, l)
    down = down_operator(poset, weights, l)
    context = up.source_context
    rng = np.random.default_rng(seed)
    scale = alpha - constants.c_sqr * (constants.c_xyz - constants.c_dia)

    worst = 0.0
    for _ in range(trials):
        f = _draw(rng, poset, l)
        g = _draw(rng, poset, l)
        lhs = constants.c_dia * up.target_context.inner(up.matrix @ f, up.matrix @ g)
        rhs = (
            beta * (1.0 - alpha) * down.target_context.inner(down.matrix @ f, down.matrix @ g)
            + scale * context.inner(f, g)
            + correction_term(walks, f, g, alpha, beta)
        )
        worst = max(worst, _relative(lhs, rhs))
    return _report(
        "towards_ud_du", {"identity": worst}, trials, seed, tol, l=l, alpha=alpha, beta=beta
    )


@timed_operation("verify_correction_bound")
def verify_correction_bound(
    poset: GradedPoset,
    weights: WeightScheme,
    l: int,
    alpha: float = 0.5,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    tol: float = IDENTITY_TOLERANCE,
    table: Optional[LinkTable] = None,
) -> ResidualReport:
    """
    With beta = 1, corr(f, f) <= (mu'_{l-1} - alpha)_+ ||f||^2 and
    |corr(f, g)| <= max(|mu'_{l-1} - alpha|, |nu'_{l-1} - alpha|) ||f|| ||g||.

    The residual is the largest excess of the correction over its bound.
    """
    if not 0 <= l <= poset.d - 1:
        raise BadRankError(message=f"The correction bound needs 0 <= l <= {poset.d - 1}", level=l)
    table = table or LinkTable(poset, weights)
    walks = link_walks(table, l)
    nu, mu = link_upper_extremes(table, l - 1)
    if mu is None or nu is None:
        nu = mu = alpha
    one_sided = max(mu - alpha, 0.0)
    two_sided = max(abs(mu - alpha), abs(nu - alpha))
    context = InnerProductContext.of(poset, weights, l)
    rng = np.random.default_rng(seed)

    diagonal_excess = 0.0
    cross_excess = 0.0
    for _ in range(trials):
        f = _draw(rng, poset, l)
        g = _draw(rng, poset, l)
        diagonal = correction_term(walks, f, f, alpha)
        diagonal_excess = max(diagonal_excess, diagonal - one_sided * context.inner(f, f))
        cross = abs(correction_term(walks, f, g, alpha))
        cross_excess = max(cross_excess, cross - two_sided * context.norm(f) * context.norm(g))
    return _report(
        "correction_bound",
        {"diagonal_excess": max(diagonal_excess, 0.0), "cross_excess": max(cross_excess, 0.0)},
        trials,
        seed,
        tol,
        l=l,
        alpha=alpha,
        mu_prime=mu,
        nu_prime=nu,
    )


# ============================================================================
# Adjacency localization (AL)
# ============================================================================

@timed_operation("verify_adjacency_localization")
def verify_adjacency_localization(
    poset: GradedPoset,
    weights: WeightScheme,
    l: int,
    al_report: Optional[ALReport] = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    tol: float = IDENTITY_TOLERANCE,
    table: Optional[LinkTable] = None,
) -> ResidualReport:
    """
    <A_l f, f> = sum over s in P(l-1) of m(s) <A_s f_s, f_s>_s.

    Raises:
        NonStandardSchemeError: If the scheme is not standard.
        PropertyViolationError: If AL holds only approximately.
        BadRankError: Unless 0 <= l <= d-1.
    """
    if not weights.is_standard(poset):
        raise NonStandardSchemeError(message="Adjacency localization needs a standard scheme")
    if not 0 <= l <= poset.d - 1:
        raise BadRankError(message=f"Adjacency localization needs 0 <= l <= {poset.d - 1}", level=l)
    al_report = al_report or check_AL(poset, weights)
    if not al_report.exact:
        raise PropertyViolationError(
            message="Property AL does not hold exactly",
            property_name="AL",
            details={"max_deviation": al_report.max_deviation},
        )
    table = table or LinkTable(poset, weights)
    adjacency = adjacency_operator(poset, weights, l)
    views = _views(
        table, l - 1, l, lambda link, level: adjacency_operator(link.poset, link.weights, level)
    )
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = _draw(rng, poset, l)
        local = _local_sum(
            views, f, f, lambda v, a, b: v.operator.quadratic(a, b)  # type: ignore[union-attr]
        )
        worst = max(worst, _relative(adjacency.quadratic(f, f), local))
    return _report("adjacency_localization", {"identity": worst}, trials, seed, tol, l=l)


# ============================================================================
# Trickling localization (TL)
# ============================================================================

@timed_operation("verify_trickling_localization")
def verify_trickling_localization(
    poset: GradedPoset,
    weights: WeightScheme,
    tl_report: Optional[TLReport] = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    tol: float = IDENTITY_TOLERANCE,
    table: Optional[LinkTable] = None,
    first_only: bool = False,
) -> ResidualReport:
    """
    The three hat-localization identities over the vertex links.

    1. <hf_x, 1>_x = (A_0 f)(x) for every vertex x.
    2. sum m(x) <hf_x, hg_x>_x = c_same <f, g> + c_diff <A_0 f, g>.
    3. <A_0 f, g> = (sum m(x) <A_x hf_x, hg_x>_x - c_same2 <f, g>) / c_diff2.

    The first identity needs no TL; ``first_only`` checks it alone.

    Raises:
        NonStandardSchemeError: If the scheme is not standard.
        BadRankError: If d < 2.
        PropertyViolationError: If TL holds only approximately and the second
            and third identities are requested.
    """
    if not weights.is_standard(poset):
        raise NonStandardSchemeError(message="Trickling localization needs a standard scheme")
    if poset.d < 2:
        raise BadRankError(message="Trickling localization needs rank >= 2", level=poset.d)
    if not first_only:
        tl_report = tl_report or check_TL(poset, weights)
        if not tl_report.exact:
            raise PropertyViolationError(
                message="Property TL does not hold exactly",
                property_name="TL",
                details={"constants": list(tl_report.constants)},
            )
    table = table or LinkTable(poset, weights)
    adjacency = adjacency_operator(poset, weights, 0)
    context = adjacency.source_context
    links = table.links_at(0)
    local = [
        (
            float(weights.m[link.base]),
            link,
            InnerProductContext.of(link.poset, link.weights, 0),
            adjacency_operator(link.poset, link.weights, 0),
        )
        for link in links
    ]
    rng = np.random.default_rng(seed)

    def hats(values: np.ndarray) -> list[np.ndarray]:
        cochain = Cochain(0, values)
        return [hat_localize(poset, weights, cochain, link).values for _, link, _, _ in local]

    first = second = third = 0.0
    for _ in range(trials):
        f = _draw(rng, poset, 0)
        g = _draw(rng, poset, 0)
        af = adjacency.matrix @ f
        hat_f = hats(f)
        for (_, link, ctx, _), hf in zip(local, hat_f):
            ones = np.ones(len(hf))
            first = max(first, _relative(af[poset.position(link.base)], ctx.inner(hf, ones)))
        if first_only:
            continue
        hat_g = hats(g)
        c_same, c_diff, c_same2, c_diff2 = tl_report.constants  # type: ignore[union-attr]
        norm_sum = sum(m * ctx.inner(hf, hg) for (m, _, ctx, _), hf, hg in zip(local, hat_f, hat_g))
        adjacency_fg = context.inner(af, g)
        expected = c_same * context.inner(f, g) + c_diff * adjacency_fg
        second = max(second, _relative(norm_sum, expected))
        local_adjacency = sum(
            m * op.quadratic(hf, hg) for (m, _, _, op), hf, hg in zip(local, hat_f, hat_g)
        )
        # multiplied through by c_diff2, which vanishes on some degenerate links
        third = max(
            third,
            _relative(c_diff2 * adjacency_fg, local_adjacency - c_same2 * context.inner(f, g)),
        )
    residuals = {"hat_mean": first}
    if not first_only:
        residuals.update({"hat_norm": second, "adjacency_decomposition": third})
    return _report("trickling_localization", residuals, trials, seed, tol)
