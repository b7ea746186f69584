"""Enumerations for poset_hdx."""

from enum import Enum


class ViolationKind(Enum):
    """Invariants checked by poset validation."""
    UNIQUE_MINIMUM = "unique_minimum"
    GRADING = "grading"
    PURITY = "purity"
    ACYCLIC = "acyclic"
    TRANSITION_SUM = "transition_sum"
    TRANSITION_RANGE = "transition_range"
    WEIGHT_POSITIVE = "weight_positive"
    WEIGHT_EQUATION = "weight_equation"
    MINIMUM_WEIGHT = "minimum_weight"
    LEVEL_SUM = "level_sum"
    CONSERVATION = "conservation"


class CertificateKind(Enum):
    """Expansion certificate types."""
    ONE_SIDED = "one-sided"
    TWO_SIDED = "two-sided"
    EPOSET = "eposet"


class WalkKind(Enum):
    """Operators exposed by the spectrum command."""
    UP_DOWN = "up-down"
    DOWN_UP = "down-up"
    ADJACENCY = "adjacency"


class OracleCase(Enum):
    """Shapes of rank-(d-2) links in a posetification."""
    SINGLE = "single"
    BOUQUET = "bouquet"
    GPRIME = "gprime"


class ConstantsSource(Enum):
    """Where the constants of an eposet residual came from."""
    SUPPLIED = "supplied"
    FITTED = "fitted"
    REGULAR = "regular"


class Verdict(Enum):
    """Outcome of a single theorem check."""
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"
