"""Exception hierarchy for poset construction, operators and verifiers."""

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class PosetError(Exception):
    """
    Base exception for all poset_hdx failures.

    Attributes:
        message: Human-readable error description.
        element: Label of the offending element, when one is known.
        level: Cochain level or rank involved, when one is known.
        details: Additional structured context.
    """
    message: str
    element: Optional[str] = None
    level: Optional[int] = None
    details: Optional[dict] = field(default_factory=dict)

    def __post_init__(self):
        if self.details is None:
            self.details = {}
        super().__init__(str(self))

    def __str__(self) -> str:
        parts = [self.message]
        if self.element is not None:
            parts.append(f"Element: {self.element}")
        if self.level is not None:
            parts.append(f"Level: {self.level}")
        return " | ".join(parts)

    def to_dict(self) -> dict[str, Any]:
        """Convert error to dictionary for logging/serialization."""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "element": self.element,
            "level": self.level,
            "details": self.details,
        }


@dataclass
class InvalidPosetError(PosetError):
    """Raised when a poset cannot even be assembled (unknown ids, duplicate labels)."""


@dataclass
class NotComparableError(PosetError):
    """Raised when an order query needs x <= y but the elements are incomparable."""


@dataclass
class BadRankError(PosetError):
    """Raised when a rank or level argument is outside the range an operation allows."""


@dataclass
class NonPureError(PosetError):
    """Raised when facets of mixed sizes are supplied to a pure construction."""


@dataclass
class FacetParseError(PosetError):
    """
    Raised when a facet file cannot be parsed.

    The offending line number, when known, is stored in ``line``.
    """
    line: Optional[int] = None

    def __str__(self) -> str:
        base = super().__str__()
        if self.line is not None:
            return f"{base} | Line: {self.line}"
        return base


@dataclass
class ResourceLimitError(PosetError):
    """Raised when a construction would exceed the configured element cap."""

    def get_suggestions(self) -> list[str]:
        """Return suggestions for staying inside the cap."""
        suggestions = [
            "Lower the dimension d or the ambient dimension n",
            "Raise the cap with --max-elements or POSET_HDX_MAX_ELEMENTS",
        ]
        if self.details.get("q", 2) > 2:
            suggestions.append("Try the same construction over a smaller field")
        return suggestions


@dataclass
class DegenerateCoverError(PosetError):
    """Raised when an adjacency operator meets an element covering a single child."""


@dataclass
class NotSelfAdjointError(PosetError):
    """Raised when an operator is not self-adjoint for the weighted inner product."""

    @property
    def residual(self) -> float:
        """Symmetrization residual that exceeded the tolerance."""
        return float(self.details.get("residual", float("nan")))


@dataclass
class NonStandardSchemeError(PosetError):
    """Raised when an operation requires uniform transition probabilities."""


@dataclass
class LevelMismatchError(PosetError):
    """Raised when cochains or operators of different levels are combined."""


@dataclass
class MissingRegularityError(PosetError):
    """Raised when closed forms need regularity constants the poset does not have."""


@dataclass
class MissingULReportError(PosetError):
    """Raised when an up-localization verifier is called without UL constants."""


@dataclass
class PropertyViolationError(PosetError):
    """
    Raised when a weight property (AL or TL) is required but only approximately holds.

    ``property_name`` is ``"AL"`` or ``"TL"``; the deviation is in ``details``.
    """
    property_name: str = ""


@dataclass
class NotMeanZeroError(PosetError):
    """Raised when a decomposition receives a cochain with nonzero mean."""


@dataclass
class NotInjectiveError(PosetError):
    """Raised when an up operator needed for a unique decomposition has a kernel."""


@dataclass
class NotBipartiteError(PosetError):
    """Raised when a link graph oracle is given a non-bipartite or disconnected graph."""


@dataclass
class BadArgumentsError(PosetError):
    """Raised for invalid numeric arguments (negative sizes, q not a prime power)."""


@dataclass
class HypothesisError(PosetError):
    """Raised when a theorem verifier's hypotheses are not met."""
    missing: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.missing is None:
            self.missing = []
        super().__post_init__()

    def __str__(self) -> str:
        base = super().__str__()
        if self.missing:
            return f"{base} | Missing: {', '.join(self.missing)}"
        return base


class HypothesisLedger:
    """
    Collects unmet hypotheses of a verifier before deciding to raise.

    Verifiers record each failed precondition with ``require`` and call
    ``raise_if_unmet`` once all of them have been checked, so the resulting
    error lists every missing item instead of the first one.
    """

    def __init__(self, theorem: str):
        self.theorem = theorem
        self.missing: list[str] = []
        self.warnings: list[str] = []

    def require(self, condition: bool, description: str) -> bool:
        """Record ``description`` as missing unless ``condition`` holds."""
        if not condition:
            self.missing.append(description)
        return condition

    def add_warning(self, message: str) -> None:
        """Add a non-blocking warning."""
        self.warnings.append(message)

    def is_satisfied(self) -> bool:
        """Check whether every recorded hypothesis held."""
        return not self.missing

    def raise_if_unmet(self) -> None:
        """Raise HypothesisError listing every missing hypothesis."""
        if self.missing:
            raise HypothesisError(
                message=f"Hypotheses of {self.theorem} not met",
                missing=list(self.missing),
                details={"theorem": self.theorem},
            )

    def get_summary(self) -> dict[str, Any]:
        """Get a summary of the recorded hypotheses."""
        return {
            "theorem": self.theorem,
            "satisfied": self.is_satisfied(),
            "missing": list(self.missing),
            "warnings": list(self.warnings),
        }
