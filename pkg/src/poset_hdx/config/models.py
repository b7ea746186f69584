"""Data models for run configuration."""

import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..constructors.grassmannian import DEFAULT_MAX_ELEMENTS
from ..constructors.qanalog import check_prime_power
from ..exceptions import BadArgumentsError
from ..theorems.localization import DEFAULT_SEED, DEFAULT_TRIALS

logger = logging.getLogger(__name__)

MAX_ELEMENTS_ENV = "POSET_HDX_MAX_ELEMENTS"

SUITE_STEPS = (
    "validation",
    "regularity",
    "properties",
    "basic-localization",
    "up-localization",
    "towards-ud-du",
    "adjacency-localization",
    "trickling-localization",
    "ko-bound",
    "alev-lau",
    "trickle",
    "eposet",
    "eposet-decomposition",
    "posetification",
)


def default_max_elements() -> int:
    """Resource cap, overridable through ``POSET_HDX_MAX_ELEMENTS``."""
    raw = os.environ.get(MAX_ELEMENTS_ENV)
    if raw is None:
        return DEFAULT_MAX_ELEMENTS
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring {MAX_ELEMENTS_ENV}={raw!r}: not an integer")
        return DEFAULT_MAX_ELEMENTS
    if value < 1:
        logger.warning(f"Ignoring {MAX_ELEMENTS_ENV}={value}: must be positive")
        return DEFAULT_MAX_ELEMENTS
    return value


class Tolerances(BaseModel):
    """Numeric tolerances shared by validation, identities and bound checks."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    identity: float = 1e-9
    bound: float = 1e-9
    uniformity: float = 1e-9
    weight: float = 1e-12
    self_adjoint: float = 1e-8
    rank: float = 1e-10

    @field_validator("*")
    @classmethod
    def _positive(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("tolerances must be positive")
        return value


class RunConfig(BaseModel):
    """
    Configuration of one CLI run.

    Every field mirrors a command-line flag of the same name; a JSON config
    file uses the same keys and takes precedence over flags.
    """

    model_config = ConfigDict(extra="forbid")

    command: Optional[str] = None
    input: Optional[str] = None
    out: Optional[str] = None

    # build
    facets: Optional[str] = None
    grassmannian: bool = False
    posetify: bool = False
    q: Optional[int] = None
    n: Optional[int] = None
    d: Optional[int] = None
    jitter: float = 0.0
    jitter_seed: int = 0
    max_elements: int = Field(default_factory=default_max_elements)

    # certify
    one_sided: Optional[float] = None
    two_sided_nu: Optional[float] = None
    two_sided_lambda: Optional[float] = None
    eposet: Optional[str] = None
    eposet_lambda: Optional[float] = None

    # verify
    only: List[str] = Field(default_factory=list)
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    alpha: float = 0.5

    # spectrum
    operator: str = "adjacency"
    level: int = 0
    dump_matrix: Optional[str] = None

    jobs: int = 1
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @field_validator("q")
    @classmethod
    def _prime_power(cls, value: Optional[int]) -> Optional[int]:
        if value is None:
            return value
        try:
            check_prime_power(value)
        except BadArgumentsError as e:
            raise ValueError(e.message) from e
        return value

    @field_validator("jobs", "trials", "max_elements")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be at least 1")
        return value

    @field_validator("jitter")
    @classmethod
    def _jitter_range(cls, value: float) -> float:
        if not 0 <= value < 1:
            raise ValueError("jitter must lie in [0, 1)")
        return value

    @field_validator("only")
    @classmethod
    def _known_steps(cls, value: List[str]) -> List[str]:
        unknown = [step for step in value if step not in SUITE_STEPS]
        if unknown:
            raise ValueError(f"unknown suite steps {unknown}; choose from {list(SUITE_STEPS)}")
        return value

    @field_validator("eposet")
    @classmethod
    def _eposet_mode(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in ("auto", "regular"):
            raise ValueError("eposet must be 'auto' or 'regular'")
        return value

    @field_validator("operator")
    @classmethod
    def _operator_name(cls, value: str) -> str:
        if value not in ("adjacency", "up-down", "down-up"):
            raise ValueError("operator must be 'adjacency', 'up-down' or 'down-up'")
        return value


@dataclass
class ValidationResult:
    """Result of configuration validation."""
    is_valid: bool
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def add_error(self, message: str) -> None:
        """Add an error message."""
        self.errors.append(message)
        self.is_valid = False

    def add_warning(self, message: str) -> None:
        """Add a warning message."""
        self.warnings.append(message)

    def merge(self, other: "ValidationResult") -> "ValidationResult":
        """Merge another validation result into this one."""
        return ValidationResult(
            is_valid=self.is_valid and other.is_valid,
            errors=self.errors + other.errors,
            warnings=self.warnings + other.warnings,
        )


class ConfigurationError(Exception):
    """Exception raised for configuration errors."""

    def __init__(self, message: str, validation_result: Optional[ValidationResult] = None):
        super().__init__(message)
        self.message = message
        self.validation_result = validation_result
