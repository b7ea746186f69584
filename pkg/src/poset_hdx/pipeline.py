"""End-to-end verification suite for a weighted graded poset.

This module wires property detection and every verifier of the theorems
package into one ordered run. Each step yields BoundChecks; a step whose
hypotheses fail yields skipped checks instead of aborting the run.
"""

import functools
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .config.models import SUITE_STEPS, RunConfig
from .constructors.simplicial import FacetList
from .core.links import LinkTable
from .core.validation import validate_poset
from .exceptions import PosetError
from .models.poset import GradedPoset, WeightScheme
from .models.reports import (
    ALReport,
    BoundCheck,
    RegularityReport,
    TLReport,
    ULReport,
    to_jsonable,
)
from .performance import PerformanceMonitor, SimpleCache
from .properties.predictions import constants_from_regularity
from .properties.regularity import RELATION_TOLERANCE, detect_regularity
from .properties.weight_properties import check_AL, check_TL, check_UL
from .theorems.alev_lau import alev_lau_bound
from .theorems.decomposition import bound_up_norm, ko_decomposition
from .theorems.eposet import eposet_decomposition, eposet_from_two_sided, two_sided_from_eposet
from .theorems.localization import (
    verify_adjacency_localization,
    verify_basic_localization,
    verify_correction_bound,
    verify_towards_ud_du,
    verify_trickling_localization,
    verify_up_localization,
)
from .theorems.posetification import posetification_certificate
from .theorems.trickling import trickle_verify

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    """Result of one verification suite run."""

    success: bool
    checks: List[BoundCheck] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    seed: int = 0
    trials: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)
    processing_time: float = 0.0

    @property
    def failed(self) -> List[BoundCheck]:
        return [c for c in self.checks if c.verdict is False]

    @property
    def skipped(self) -> List[BoundCheck]:
        return [c for c in self.checks if c.verdict is None]

    def by_theorem(self, theorem: str) -> List[BoundCheck]:
        return [c for c in self.checks if c.theorem == theorem]

    def to_dict(self) -> Dict[str, Any]:
        """JSON structure of the run; timings are left out so reports stay reproducible."""
        return {
            "success": self.success,
            "seed": self.seed,
            "trials": self.trials,
            "checks": [c.to_dict() for c in self.checks],
            "errors": list(self.errors),
            "warnings": list(self.warnings),
            "metadata": to_jsonable(self.metadata),
        }


@dataclass
class SuiteStats:
    """Statistics about suite executions."""

    total_executions: int = 0
    successful_executions: int = 0
    failed_executions: int = 0
    average_processing_time: float = 0.0
    total_processing_time: float = 0.0


class _RunState:
    """Per-run data shared by the steps; property reports are computed on first use."""

    def __init__(
        self,
        poset: GradedPoset,
        weights: WeightScheme,
        config: RunConfig,
        origin: Dict[str, Any],
    ):
        self.poset = poset
        self.weights = weights
        self.config = config
        self.origin = origin
        self.table = LinkTable(poset, weights, SimpleCache(max_size=max(len(poset), 1)))

    @functools.cached_property
    def regularity(self) -> RegularityReport:
        return detect_regularity(self.poset)

    @functools.cached_property
    def ul(self) -> ULReport:
        return check_UL(self.poset, self.weights, self.config.tolerances.uniformity)

    @functools.cached_property
    def al(self) -> ALReport:
        return check_AL(self.poset, self.weights, self.config.tolerances.uniformity)

    @functools.cached_property
    def tl(self) -> TLReport:
        return check_TL(self.poset, self.weights, self.config.tolerances.uniformity)

    def random_cochain(self, level: int, salt: int, mean_zero: bool = False) -> np.ndarray:
        rng = np.random.default_rng([self.config.seed, salt, level + 1])
        f = rng.standard_normal(self.poset.level_size(level))
        if mean_zero:
            f = f - float(self.weights.level_masses(self.poset, level) @ f)
        return f


class VerificationSuite:
    """
    Runs every applicable verifier on one weighted poset.

    Steps run in the order of ``SUITE_STEPS``; ``only`` restricts a run to
    the named steps. Property reports needed by a step are computed on
    demand, so a restricted run does not pay for skipped steps.
    """

    def __init__(self, config: Optional[RunConfig] = None):
        """
        Initialize the verification suite.

        Args:
            config: Run configuration (trials, seed, tolerances, alpha, jobs).
        """
        self.config = config or RunConfig()
        self.stats = SuiteStats()
        self.performance_monitor = PerformanceMonitor()
        self._steps: Dict[str, Callable[[_RunState], List[BoundCheck]]] = {
            "validation": self._validation,
            "regularity": self._regularity,
            "properties": self._properties,
            "basic-localization": self._basic_localization,
            "up-localization": self._up_localization,
            "towards-ud-du": self._towards_ud_du,
            "adjacency-localization": self._adjacency_localization,
            "trickling-localization": self._trickling_localization,
            "ko-bound": self._ko_bound,
            "alev-lau": self._alev_lau,
            "trickle": self._trickle,
            "eposet": self._eposet,
            "eposet-decomposition": self._eposet_decomposition,
            "posetification": self._posetification,
        }

    def run(
        self,
        poset: GradedPoset,
        weights: WeightScheme,
        only: Optional[Sequence[str]] = None,
        origin: Optional[Dict[str, Any]] = None,
    ) -> SuiteResult:
        """
        Execute the suite.

        Args:
            poset: Poset to verify.
            weights: Weight scheme on ``poset``.
            only: Step names to run; all steps when empty or None.
            origin: Construction record of the poset (enables the posetification step).

        Returns:
            SuiteResult; ``success`` is False on any failed check or step error.
        """
        start_time = time.time()
        selected = list(only or self.config.only or SUITE_STEPS)
        result = SuiteResult(success=False, seed=self.config.seed, trials=self.config.trials)
        state = _RunState(poset, weights, self.config, dict(origin or {}))
        overall_metric = self.performance_monitor.start_operation("suite_run", size=len(poset))

        try:
            logger.info(f"Starting verification suite on {len(poset)} elements, d={poset.d}")
            for number, name in enumerate(SUITE_STEPS, start=1):
                if name not in selected:
                    continue
                logger.info(f"Step {number}: {name}")
                metric = self.performance_monitor.start_operation(name)
                try:
                    checks = self._steps[name](state)
                    self.performance_monitor.end_operation(metric)
                except Exception as e:
                    error_msg = f"Step {name} failed: {e}"
                    result.errors.append(error_msg)
                    logger.exception(error_msg)
                    self.performance_monitor.end_operation(metric, success=False, error=error_msg)
                    continue
                result.checks.extend(checks)
                for check in checks:
                    if check.verdict is None:
                        result.warnings.append(f"{check.theorem}: {check.details.get('reason')}")
                if name == "validation" and any(c.verdict is False for c in checks):
                    result.errors.append("Poset or weights are invalid; remaining steps not run")
                    break

            result.metadata.update(self._metadata(state))
            result.success = not result.errors and not result.failed
            self.performance_monitor.end_operation(overall_metric, success=result.success)
            logger.info(
                f"Suite finished: {len(result.checks)} checks, {len(result.failed)} failed, "
                f"{len(result.skipped)} skipped"
            )
        except Exception as e:
            error_msg = f"Verification suite failed: {e}"
            result.errors.append(error_msg)
            logger.exception(error_msg)
            self.performance_monitor.end_operation(overall_metric, success=False, error=error_msg)
        finally:
            result.processing_time = time.time() - start_time
            self._update_stats(result)
            for operation, stats in self.performance_monitor.get_all_stats().items():
                logger.debug(f"{operation}: {stats}")

        return result

    # =========================================================================
    # Helpers
    # =========================================================================

    @staticmethod
    def _attempt(theorem: str, build: Callable[[], BoundCheck], **details: Any) -> BoundCheck:
        """Run one verifier; unmet hypotheses become a skipped check."""
        try:
            return build()
        except PosetError as e:
            logger.warning(f"{theorem} skipped: {e}")
            return BoundCheck.skipped(theorem, str(e), **details)

    def _metadata(self, state: _RunState) -> Dict[str, Any]:
        poset = state.poset
        metadata: Dict[str, Any] = {
            "d": poset.d,
            "level_sizes": poset.level_sizes(),
            "standard": state.weights.is_standard(poset),
            "tolerances": self.config.tolerances.model_dump(),
        }
        if "regularity" in state.__dict__:
            metadata["regularity"] = state.regularity.to_dict()
        for name in ("ul", "al", "tl"):
            if name in state.__dict__:
                metadata[name] = getattr(state, name).to_dict()
        if state.origin:
            metadata["origin"] = {k: v for k, v in state.origin.items() if k != "facets"}
        return metadata

    def _levels(self, state: _RunState) -> range:
        return range(0, state.poset.d)

    # =========================================================================
    # Steps
    # =========================================================================

    def _validation(self, state: _RunState) -> List[BoundCheck]:
        report = validate_poset(state.poset, state.weights, self.config.tolerances.weight)
        return [
            BoundCheck(
                theorem="validation",
                bound=0,
                measured=len(report.violations),
                verdict=report.is_valid,
                details=report.to_dict(),
            )
        ]

    def _regularity(self, state: _RunState) -> List[BoundCheck]:
        report = state.regularity
        residuals = dict(report.relation_residuals)
        if report.r_y_residual is not None:
            residuals["y"] = report.r_y_residual
        if not residuals:
            return [BoundCheck.skipped("regularity_relations", "no regular levels to relate")]
        worst = max(residuals.values())
        return [
            BoundCheck(
                theorem="regularity_relations",
                bound=RELATION_TOLERANCE,
                measured=worst,
                verdict=worst <= RELATION_TOLERANCE,
                details={"residuals": residuals, "regular": report.is_regular},
            )
        ]

    def _properties(self, state: _RunState) -> List[BoundCheck]:
        tol = self.config.tolerances.bound
        checks = [self._attempt("ul_constant_relation", lambda: self._ul_relation(state))]
        checks.append(self._attempt("predicted_constants", lambda: self._predicted(state, tol)))
        checks.append(self._attempt("al_deviation", lambda: self._al_deviation(state)))
        checks.append(self._attempt("tl_sums", lambda: self._tl_sums(state)))
        return checks

    def _al_deviation(self, state: _RunState) -> BoundCheck:
        al = state.al
        if not al.exact:
            return BoundCheck.skipped(
                "al_deviation", "AL holds only approximately", deviation=al.max_deviation
            )
        return BoundCheck(
            "al_deviation",
            self.config.tolerances.uniformity,
            al.max_deviation,
            True,
            {"pairs_checked": al.pairs_checked},
        )

    def _ul_relation(self, state: _RunState) -> BoundCheck:
        if not state.ul.exact:
            return BoundCheck.skipped("ul_constant_relation", "UL holds only approximately")
        residuals = {l: lvl.c_relation_residual for l, lvl in state.ul.levels.items()}
        worst = max(residuals.values(), default=0.0)
        return BoundCheck(
            "ul_constant_relation",
            RELATION_TOLERANCE,
            worst,
            worst <= RELATION_TOLERANCE,
            {"residuals": residuals},
        )

    def _predicted(self, state: _RunState, tol: float) -> BoundCheck:
        if not state.weights.is_standard(state.poset):
            return BoundCheck.skipped("predicted_constants", "weight scheme is not standard")
        predicted = constants_from_regularity(state.regularity)
        gaps: Dict[str, float] = {}
        for l, (c_xyz, c_dia, c_sqr) in predicted.ul.items():
            if l not in state.ul.levels:
                continue
            lvl = state.ul.levels[l]
            gaps[f"ul_{l}"] = max(
                abs(lvl.c_xyz - c_xyz), abs(lvl.c_dia - c_dia), abs(lvl.c_sqr - c_sqr)
            )
        if predicted.tl is not None and state.poset.d >= 2:
            gaps["tl"] = max(abs(a - b) for a, b in zip(state.tl.constants, predicted.tl))
        worst = max(gaps.values(), default=0.0)
        return BoundCheck(
            "predicted_constants", tol, worst, worst <= tol, {"gaps": gaps, **predicted.to_dict()}
        )

    def _tl_sums(self, state: _RunState) -> BoundCheck:
        if state.poset.d < 2:
            return BoundCheck.skipped("tl_sums", "TL needs rank d >= 2")
        tl = state.tl
        worst = max(tl.first_sum_residual, tl.second_sum_residual)
        tol = self.config.tolerances.bound
        return BoundCheck("tl_sums", tol, worst, worst <= tol, {"exact": tl.exact})

    def _basic_localization(self, state: _RunState) -> List[BoundCheck]:
        cfg = self.config
        checks = []
        for l in range(0, state.poset.d + 1):
            for k in range(-1, l):
                checks.append(
                    self._attempt(
                        "basic_localization",
                        lambda k=k, l=l: verify_basic_localization(
                            state.poset,
                            state.weights,
                            k,
                            l,
                            cfg.trials,
                            cfg.seed,
                            cfg.tolerances.identity,
                            state.table,
                        ).to_bound_check(),
                        k=k,
                        l=l,
                    )
                )
        return checks

    def _up_localization(self, state: _RunState) -> List[BoundCheck]:
        cfg = self.config
        return [
            self._attempt(
                "up_localization",
                lambda l=l: verify_up_localization(
                    state.poset,
                    state.weights,
                    l,
                    state.ul,
                    cfg.trials,
                    cfg.seed,
                    cfg.tolerances.identity,
                    state.table,
                ).to_bound_check(),
                l=l,
            )
            for l in self._levels(state)
        ]

    def _towards_ud_du(self, state: _RunState) -> List[BoundCheck]:
        cfg = self.config
        checks = []
        for l in self._levels(state):
            checks.append(
                self._attempt(
                    "towards_ud_du",
                    lambda l=l: verify_towards_ud_du(
                        state.poset,
                        state.weights,
                        l,
                        state.ul,
                        alpha=cfg.alpha,
                        trials=cfg.trials,
                        seed=cfg.seed,
                        tol=cfg.tolerances.identity,
                        table=state.table,
                    ).to_bound_check(),
                    l=l,
                )
            )
            checks.append(
                self._attempt(
                    "correction_bound",
                    lambda l=l: verify_correction_bound(
                        state.poset,
                        state.weights,
                        l,
                        alpha=cfg.alpha,
                        trials=cfg.trials,
                        seed=cfg.seed,
                        tol=cfg.tolerances.identity,
                        table=state.table,
                    ).to_bound_check(),
                    l=l,
                )
            )
        return checks

    def _adjacency_localization(self, state: _RunState) -> List[BoundCheck]:
        cfg = self.config
        return [
            self._attempt(
                "adjacency_localization",
                lambda l=l: verify_adjacency_localization(
                    state.poset,
                    state.weights,
                    l,
                    state.al,
                    cfg.trials,
                    cfg.seed,
                    cfg.tolerances.identity,
                    state.table,
                ).to_bound_check(),
                l=l,
            )
            for l in self._levels(state)
        ]

    def _trickling_localization(self, state: _RunState) -> List[BoundCheck]:
        cfg = self.config
        return [
            self._attempt(
                "trickling_localization",
                lambda: verify_trickling_localization(
                    state.poset,
                    state.weights,
                    state.tl,
                    cfg.trials,
                    cfg.seed,
                    cfg.tolerances.identity,
                    state.table,
                ).to_bound_check(),
            )
        ]

    def _ko_bound(self, state: _RunState) -> List[BoundCheck]:
        cfg = self.config
        checks = []
        for k in self._levels(state):
            alphas = [cfg.alpha] * (k + 1)
            checks.append(
                self._attempt(
                    "up_norm_bound",
                    lambda k=k, alphas=alphas: bound_up_norm(
                        state.poset,
                        state.weights,
                        k,
                        alphas,
                        state.ul,
                        state.table,
                        cfg.tolerances.bound,
                    ),
                    k=k,
                )
            )
            checks.append(
                self._attempt(
                    "ko_decomposition",
                    lambda k=k, alphas=alphas: self._ko_residual(state, k, alphas),
                    k=k,
                )
            )
        return checks

    def _ko_residual(self, state: _RunState, k: int, alphas: List[float]) -> BoundCheck:
        f = state.random_cochain(k, salt=1, mean_zero=True)
        result = ko_decomposition(state.poset, state.weights, k, alphas, f, state.ul, state.table)
        worst = max(result.max_norm_residual, result.max_up_norm_residual)
        tol = self.config.tolerances.identity
        return BoundCheck(
            "ko_decomposition",
            tol,
            worst,
            worst <= tol,
            {"k": k, "alphas": alphas, "h_norms_sq": result.h_norms_sq},
        )

    def _alev_lau(self, state: _RunState) -> List[BoundCheck]:
        return [
            self._attempt(
                "alev_lau",
                lambda l=l: alev_lau_bound(
                    state.poset, state.weights, l, state.regularity, state.al, state.table
                ),
                l=l,
            )
            for l in self._levels(state)
        ]

    def _trickle(self, state: _RunState) -> List[BoundCheck]:
        def build() -> BoundCheck:
            bound = trickle_verify(
                state.poset,
                state.weights,
                state.regularity,
                state.table,
                self.config.tolerances.bound,
            )
            low = min(bound.intervals) if bound.intervals else None
            return BoundCheck(
                "trickling",
                bound.intervals[low][1] if low is not None else None,
                bound.measured[low][1] if low in bound.measured else None,
                bound.verdict,
                bound.to_dict(),
            )

        return [self._attempt("trickling", build)]

    def _eposet(self, state: _RunState) -> List[BoundCheck]:
        tol = self.config.tolerances.bound
        return [
            self._attempt(
                "eposet_from_two_sided",
                lambda: eposet_from_two_sided(
                    state.poset, state.weights, state.regularity, state.al, state.table, tol
                ),
            ),
            self._attempt(
                "two_sided_from_eposet",
                lambda: two_sided_from_eposet(
                    state.poset, state.weights, state.regularity, None, state.table, tol
                ),
            ),
        ]

    def _eposet_decomposition(self, state: _RunState) -> List[BoundCheck]:
        tol = self.config.tolerances.identity

        def build(l: int) -> BoundCheck:
            f = state.random_cochain(l, salt=2)
            result = eposet_decomposition(
                state.poset, state.weights, l, f, regularity=state.regularity
            )
            residual = result.reconstruction_residual
            return BoundCheck(
                "eposet_decomposition",
                tol,
                residual,
                residual <= tol,
                {"l": l, **result.to_dict()},
            )

        return [
            self._attempt("eposet_decomposition", lambda l=l: build(l), l=l)
            for l in self._levels(state)
        ]

    def _posetification(self, state: _RunState) -> List[BoundCheck]:
        if state.origin.get("kind") != "posetification":
            if self.config.only:
                return [BoundCheck.skipped("posetification", "poset was not built by posetify")]
            logger.debug("No posetification origin; skipping link oracles")
            return []

        def build() -> BoundCheck:
            facets = FacetList.from_iterable(state.origin["facets"])
            q = int(state.origin["q"])
            report = posetification_certificate(
                facets, q, tol=self.config.tolerances.identity
            )
            return BoundCheck(
                "posetification",
                -1.0 / q,
                report.measured_nu,
                report.verdict,
                report.to_dict(),
            )

        return [self._attempt("posetification", build)]

    def _update_stats(self, result: SuiteResult) -> None:
        """Update suite statistics."""
        self.stats.total_executions += 1
        if result.success:
            self.stats.successful_executions += 1
        else:
            self.stats.failed_executions += 1
        self.stats.total_processing_time += result.processing_time
        self.stats.average_processing_time = (
            self.stats.total_processing_time / self.stats.total_executions
        )

    def get_stats(self) -> SuiteStats:
        """Get suite execution statistics."""
        return self.stats

    def get_performance_stats(self) -> Dict[str, Dict[str, Any]]:
        """Per-step timing statistics."""
        return self.performance_monitor.get_all_stats()
