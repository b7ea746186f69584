"""Data models for poset_hdx."""

from .enums import (
    CertificateKind,
    ConstantsSource,
    OracleCase,
    Verdict,
    ViolationKind,
    WalkKind,
)
from .poset import Chain, Cochain, ElementId, GradedPoset, Link, WeightScheme
from .reports import (
    ALReport,
    BoundCheck,
    CertificateRow,
    DecompositionResult,
    EposetDecomposition,
    EposetRow,
    ExpansionCertificate,
    LocalConstants,
    OracleRow,
    PosetificationReport,
    PredictedConstants,
    RegularityReport,
    ResidualReport,
    SpectralSummary,
    TLReport,
    TricklingBound,
    ULLevel,
    ULReport,
    ValidationReport,
    Violation,
    to_jsonable,
)

__all__ = [
    "CertificateKind",
    "ConstantsSource",
    "OracleCase",
    "Verdict",
    "ViolationKind",
    "WalkKind",
    "Chain",
    "Cochain",
    "ElementId",
    "GradedPoset",
    "Link",
    "WeightScheme",
    "ALReport",
    "BoundCheck",
    "CertificateRow",
    "DecompositionResult",
    "EposetDecomposition",
    "EposetRow",
    "ExpansionCertificate",
    "LocalConstants",
    "OracleRow",
    "PosetificationReport",
    "PredictedConstants",
    "RegularityReport",
    "ResidualReport",
    "SpectralSummary",
    "TLReport",
    "TricklingBound",
    "ULLevel",
    "ULReport",
    "ValidationReport",
    "Violation",
    "to_jsonable",
]
