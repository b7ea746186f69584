"""Report data models produced by validation, property detection and verifiers."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..exceptions import MissingULReportError
from .enums import CertificateKind, ConstantsSource, OracleCase, ViolationKind


def to_jsonable(value: Any) -> Any:
    """Convert report values (numpy scalars, tuples, enums, nested reports) to JSON types."""
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return None if np.isnan(value) else value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, Enum):
        return value.value
    return value


# ============================================================================
# Validation
# ============================================================================

@dataclass
class Violation:
    """One violated poset or weight invariant."""
    kind: ViolationKind
    message: str
    elements: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "message": self.message, "elements": self.elements}


@dataclass
class ValidationReport:
    """Result of ``validate_poset``; an empty violation list means valid."""
    violations: list[Violation] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def add(self, kind: ViolationKind, message: str, elements: Optional[list[str]] = None) -> None:
        """Record a violation."""
        self.violations.append(Violation(kind, message, list(elements or [])))

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.is_valid,
            "violations": [v.to_dict() for v in self.violations],
        }


# ============================================================================
# Properties
# ============================================================================

@dataclass
class LocalConstants:
    """Two-skeleton constants of the links at one base rank (None when nonuniform)."""
    n_low_1: Optional[int] = None
    n_low_2: Optional[int] = None
    n_mid_1: Optional[int] = None
    r_y: Optional[int] = None

    @property
    def two_skeleton_regular(self) -> bool:
        return None not in (self.n_low_1, self.n_low_2, self.n_mid_1, self.r_y)

    def to_dict(self) -> dict[str, Any]:
        return to_jsonable(self.__dict__)


@dataclass
class RegularityReport:
    """
    Structural regularity constants of a graded poset.

    Each map holds a constant per level, or None where the counts disagree.
    """
    d: int
    n_low: dict[int, Optional[int]] = field(default_factory=dict)
    n_mid: dict[int, Optional[int]] = field(default_factory=dict)
    n_wedge: dict[int, Optional[int]] = field(default_factory=dict)
    r_y: Optional[int] = None
    local: dict[int, LocalConstants] = field(default_factory=dict)
    relation_residuals: dict[int, float] = field(default_factory=dict)
    r_y_residual: Optional[float] = None

    def lower_regular_at(self, i: int) -> bool:
        return self.n_low.get(i) is not None

    @property
    def lower_regular(self) -> bool:
        return all(v is not None for v in self.n_low.values())

    @property
    def middle_regular(self) -> bool:
        return all(v is not None for v in self.n_mid.values())

    @property
    def wedge_regular(self) -> bool:
        return all(v is not None for v in self.n_wedge.values())

    @property
    def y_regular(self) -> bool:
        return self.r_y is not None

    @property
    def two_skeleton_regular(self) -> bool:
        return (
            self.lower_regular_at(1)
            and self.lower_regular_at(2)
            and self.n_mid.get(1) is not None
            and self.y_regular
        )

    @property
    def is_regular(self) -> bool:
        return self.lower_regular and self.middle_regular and self.wedge_regular

    @property
    def locally_two_skeleton_regular(self) -> bool:
        return bool(self.local) and all(c.two_skeleton_regular for c in self.local.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "d": self.d,
            "n_low": to_jsonable(self.n_low),
            "n_mid": to_jsonable(self.n_mid),
            "n_wedge": to_jsonable(self.n_wedge),
            "r_y": self.r_y,
            "local": to_jsonable(self.local),
            "relation_residuals": to_jsonable(self.relation_residuals),
            "r_y_residual": to_jsonable(self.r_y_residual),
            "flags": {
                "lower_regular": self.lower_regular,
                "middle_regular": self.middle_regular,
                "wedge_regular": self.wedge_regular,
                "y_regular": self.y_regular,
                "two_skeleton_regular": self.two_skeleton_regular,
                "regular": self.is_regular,
            },
        }


UL_NOTE = "UL.1/UL.2 denominators are sums of p(c) over maximal chains c from x down to z"


@dataclass
class ULLevel:
    """
    Measured UL constants (midpoints) and deviations (half-ranges) at one level.

    ``diamond_free`` marks a level where no two elements share a cover; its
    ``c_dia`` then carries the substitute value chosen by ``check_UL``.
    """
    level: int
    c_xyz: float
    eps_xyz: float
    c_dia: float
    eps_dia: float
    c_sqr: float
    eps_sqr: float
    diamond_free: bool = False

    @property
    def eps(self) -> float:
        """Unified deviation, the largest of the three."""
        return max(self.eps_xyz, self.eps_dia, self.eps_sqr)

    @property
    def c_relation_residual(self) -> float:
        """|1/c_dia - c_sqr (c_xyz/c_dia - 1) - 1|."""
        value = 1.0 / self.c_dia - self.c_sqr * (self.c_xyz / self.c_dia - 1.0)
        return abs(value - 1.0)

    def to_dict(self) -> dict[str, Any]:
        return to_jsonable(self.__dict__)


@dataclass
class ULReport:
    """Property UL measurement for levels 0..d-1."""
    levels: dict[int, ULLevel] = field(default_factory=dict)
    exact: bool = True
    notes: str = UL_NOTE

    def level(self, l: int) -> ULLevel:
        if l not in self.levels:
            raise MissingULReportError(message="No UL constants at this level", level=l)
        return self.levels[l]

    def to_dict(self) -> dict[str, Any]:
        return {
            "notes": self.notes,
            "exact": self.exact,
            "levels": to_jsonable(self.levels),
        }


@dataclass
class ALReport:
    """Property AL measurement: relative deviation between both sides per level."""
    level_deviations: dict[int, float] = field(default_factory=dict)
    max_deviation: float = 0.0
    exact: bool = True
    pairs_checked: int = 0

    def to_dict(self) -> dict[str, Any]:
        return to_jsonable(self.__dict__)


@dataclass
class TLReport:
    """Property TL measurement (constants with deviations) in the standard forms."""
    c_same: float
    eps_same: float
    c_diff: float
    eps_diff: float
    c_same2: float
    eps_same2: float
    c_diff2: float
    eps_diff2: float
    exact: bool
    orphan_mass: float = 0.0

    @property
    def constants(self) -> tuple[float, float, float, float]:
        return (self.c_same, self.c_diff, self.c_same2, self.c_diff2)

    @property
    def first_sum_residual(self) -> float:
        return abs(self.c_same + self.c_diff - 1.0)

    @property
    def second_sum_residual(self) -> float:
        return abs(self.c_same2 + self.c_diff2 - 1.0)

    def to_dict(self) -> dict[str, Any]:
        data = to_jsonable(self.__dict__)
        data["first_sum_residual"] = self.first_sum_residual
        data["second_sum_residual"] = self.second_sum_residual
        return data


@dataclass
class PredictedConstants:
    """UL and TL constants implied by regularity."""
    ul: dict[int, tuple[float, float, float]] = field(default_factory=dict)
    tl: Optional[tuple[float, float, float, float]] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "ul": {
                str(l): {"c_xyz": v[0], "c_dia": v[1], "c_sqr": v[2]} for l, v in self.ul.items()
            },
            "tl": to_jsonable(self.tl),
        }


# ============================================================================
# Spectra and certificates
# ============================================================================

@dataclass
class SpectralSummary:
    """Eigenvalues of a self-adjoint operator, descending, with the 1-deflated extremes."""
    eigenvalues: tuple[float, ...]
    lambda_max: float
    lambda_2: Optional[float]
    lambda_min: float
    nontrivial: tuple[float, ...]
    residual: float

    @property
    def lambda_two_sided(self) -> Optional[float]:
        """max(lambda_2, |lambda_min|) over the nontrivial part."""
        if not self.nontrivial:
            return None
        return max(max(self.nontrivial), abs(min(self.nontrivial)))

    @property
    def nontrivial_min(self) -> Optional[float]:
        return min(self.nontrivial) if self.nontrivial else None

    def to_dict(self) -> dict[str, Any]:
        data = to_jsonable(self.__dict__)
        data["lambda_two_sided"] = to_jsonable(self.lambda_two_sided)
        return data


@dataclass
class CertificateRow:
    """Evidence for one link of a local spectral certificate."""
    link: str
    level: int
    lambda2: Optional[float]
    lambdamin: Optional[float]
    connected: bool
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "link": self.link,
            "level": self.level,
            "lambda2": to_jsonable(self.lambda2),
            "lambdamin": to_jsonable(self.lambdamin),
            "connected": self.connected,
            "pass": self.passed,
        }


@dataclass
class EposetRow:
    """Residual norm of DU - delta UD - r Id at one level."""
    level: int
    r: float
    delta: float
    residual: float
    source: ConstantsSource
    passed: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "r": self.r,
            "delta": self.delta,
            "residual": self.residual,
            "source": self.source.value,
            "pass": self.passed,
        }


@dataclass
class ExpansionCertificate:
    """Verdict and evidence table of an expansion certificate."""
    kind: CertificateKind
    params: dict[str, Any]
    rows: list[Any] = field(default_factory=list)
    verdict: bool = True

    def violations(self) -> list[Any]:
        return [row for row in self.rows if not row.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "params": to_jsonable(self.params),
            "rows": [row.to_dict() for row in self.rows],
            "verdict": self.verdict,
        }


# ============================================================================
# Verifier results
# ============================================================================

@dataclass
class BoundCheck:
    """
    Comparison of a theorem's bound against a measured quantity.

    ``verdict`` is None when the check was skipped (see ``details["reason"]``).
    """
    theorem: str
    bound: Optional[float]
    measured: Optional[float]
    verdict: Optional[bool]
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def skipped(cls, theorem: str, reason: str, **details: Any) -> "BoundCheck":
        return cls(theorem, None, None, None, {"reason": reason, **details})

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "bound": to_jsonable(self.bound),
            "measured": to_jsonable(self.measured),
            "verdict": to_jsonable(self.verdict),
            "details": to_jsonable(self.details),
        }


@dataclass
class ResidualReport:
    """Largest residual of an identity over seeded random trials."""
    name: str
    max_residual: float
    trials: int
    seed: int
    tolerance: float
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_bound_check(self) -> BoundCheck:
        return BoundCheck(
            theorem=self.name,
            bound=self.tolerance,
            measured=self.max_residual,
            verdict=self.passed,
            details={"trials": self.trials, "seed": self.seed, **self.details},
        )

    def to_dict(self) -> dict[str, Any]:
        return to_jsonable(self.__dict__)


@dataclass
class DecompositionResult:
    """
    Output of the up-norm decomposition of a mean-zero cochain.

    ``h[j]`` lies in ker D_j (h[0] is mean-zero), ``g[j]`` is the transported
    cochain at level j, and the coefficient tables are indexed ``(j, i)``.
    """
    k: int
    alphas: tuple[float, ...]
    h: dict[int, np.ndarray] = field(default_factory=dict)
    g: dict[int, np.ndarray] = field(default_factory=dict)
    corrections: dict[int, float] = field(default_factory=dict)
    correction_bounds: dict[int, float] = field(default_factory=dict)
    a: dict[tuple[int, int], float] = field(default_factory=dict)
    b: dict[tuple[int, int], float] = field(default_factory=dict)
    e: dict[tuple[int, int], float] = field(default_factory=dict)
    h_norms_sq: dict[int, float] = field(default_factory=dict)
    norm_residuals: dict[int, float] = field(default_factory=dict)
    up_norm_residuals: dict[int, float] = field(default_factory=dict)

    @property
    def max_norm_residual(self) -> float:
        return max(self.norm_residuals.values(), default=0.0)

    @property
    def max_up_norm_residual(self) -> float:
        return max(self.up_norm_residuals.values(), default=0.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "alphas": list(self.alphas),
            "h_norms_sq": to_jsonable(self.h_norms_sq),
            "corrections": to_jsonable(self.corrections),
            "correction_bounds": to_jsonable(self.correction_bounds),
            "a": {f"{j},{i}": v for (j, i), v in self.a.items()},
            "b": {f"{j},{i}": v for (j, i), v in self.b.items()},
            "e": {f"{j},{i}": v for (j, i), v in self.e.items()},
            "norm_residuals": to_jsonable(self.norm_residuals),
            "up_norm_residuals": to_jsonable(self.up_norm_residuals),
        }


@dataclass
class TricklingBound:
    """Intervals propagated from the top links down, with measured link spectra."""
    source: str
    start_level: int
    intervals: dict[int, tuple[float, float]] = field(default_factory=dict)
    constants: dict[int, tuple[float, float]] = field(default_factory=dict)
    measured: dict[int, tuple[float, float]] = field(default_factory=dict)
    verdicts: dict[int, bool] = field(default_factory=dict)
    fixed_points: dict[int, list[float]] = field(default_factory=dict)
    stability: dict[int, list[str]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict[str, Any]:
        data = to_jsonable(self.__dict__)
        data["verdict"] = self.verdict
        return data


@dataclass
class EposetDecomposition:
    """Components of f along U^{l-i}(ker D_i) with their defect measurements."""
    level: int
    components: dict[int, np.ndarray] = field(default_factory=dict)
    component_norms_sq: dict[int, float] = field(default_factory=dict)
    orthogonality: dict[tuple[int, int], float] = field(default_factory=dict)
    reconstruction_residual: float = 0.0
    eigen_residuals: dict[int, float] = field(default_factory=dict)
    r_table: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "component_norms_sq": to_jsonable(self.component_norms_sq),
            "orthogonality": {f"{i},{j}": v for (i, j), v in self.orthogonality.items()},
            "reconstruction_residual": self.reconstruction_residual,
            "eigen_residuals": to_jsonable(self.eigen_residuals),
            "r_table": to_jsonable(self.r_table),
        }


@dataclass
class OracleRow:
    """Measured spectrum of one rank-(d-2) link of a posetification against its closed form."""
    link: str
    case: Optional[OracleCase]
    params: dict[str, Any]
    measured: tuple[float, ...]
    predicted: Optional[tuple[float, ...]]
    max_gap: Optional[float]
    passed: Optional[bool]

    def to_dict(self) -> dict[str, Any]:
        return {
            "link": self.link,
            "case": self.case.value if self.case is not None else None,
            "params": to_jsonable(self.params),
            "measured": list(self.measured),
            "predicted": to_jsonable(self.predicted),
            "max_gap": to_jsonable(self.max_gap),
            "pass": self.passed,
        }


@dataclass
class PosetificationReport:
    """Oracle agreement, two-sided certificate and thickness data of a posetified complex."""
    q: int
    d: int
    size: int
    thickness: int
    thickness_scale: int
    max_up_degree: int
    epsilon: Optional[float]
    oracle_rows: list[OracleRow] = field(default_factory=list)
    certificate: Optional[ExpansionCertificate] = None
    measured_lambda: Optional[float] = None
    measured_nu: Optional[float] = None
    predicted_lambda: Optional[float] = None

    @property
    def gap(self) -> Optional[float]:
        """Measured lambda_2 above the limiting value (q-1)/q."""
        if self.measured_lambda is None:
            return None
        return self.measured_lambda - (self.q - 1) / self.q

    @property
    def oracle_agreement(self) -> bool:
        return all(row.passed is not False for row in self.oracle_rows)

    @property
    def verdict(self) -> bool:
        certified = self.certificate is None or self.certificate.verdict
        return self.oracle_agreement and certified

    def to_dict(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "d": self.d,
            "size": self.size,
            "thickness": self.thickness,
            "thickness_scale": self.thickness_scale,
            "max_up_degree": self.max_up_degree,
            "epsilon": to_jsonable(self.epsilon),
            "oracle_rows": [row.to_dict() for row in self.oracle_rows],
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "measured_lambda": to_jsonable(self.measured_lambda),
            "measured_nu": to_jsonable(self.measured_nu),
            "predicted_lambda": to_jsonable(self.predicted_lambda),
            "gap": to_jsonable(self.gap),
            "oracle_agreement": self.oracle_agreement,
            "verdict": self.verdict,
        }
