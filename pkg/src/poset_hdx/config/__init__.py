"""Run configuration for poset_hdx."""

from .config_manager import ConfigurationManager
from .models import (
    MAX_ELEMENTS_ENV,
    SUITE_STEPS,
    ConfigurationError,
    RunConfig,
    Tolerances,
    ValidationResult,
    default_max_elements,
)

__all__ = [
    "ConfigurationManager",
    "MAX_ELEMENTS_ENV",
    "SUITE_STEPS",
    "ConfigurationError",
    "RunConfig",
    "Tolerances",
    "ValidationResult",
    "default_max_elements",
]
