"""Configuration Manager for poset_hdx runs.

Builds a validated RunConfig from command-line flags and an optional JSON
config file. Keys of the file mirror the flags one to one; values from the
file override flag values.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from pydantic import ValidationError

from .models import ConfigurationError, RunConfig, ValidationResult

logger = logging.getLogger(__name__)

FEW_TRIALS = 10


class ConfigurationManager:
    """
    Manager for run configuration.

    Handles merging, validation, export and reset of a RunConfig.
    """

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        """
        Initialize the configuration manager.

        Args:
            config_path: Optional JSON config file applied on every ``load``.
        """
        self._config_path = Path(config_path) if config_path else None
        self._configuration = RunConfig()
        self._is_loaded = False

    @property
    def configuration(self) -> RunConfig:
        """Get the current run configuration."""
        return self._configuration

    @property
    def is_loaded(self) -> bool:
        """Check if configuration has been loaded."""
        return self._is_loaded

    def load(
        self,
        flags: Optional[Mapping[str, Any]] = None,
        config_path: Optional[Union[str, Path]] = None,
    ) -> ValidationResult:
        """
        Merge flags with the config file and validate the result.

        Flags whose value is None are treated as not given. Nested
        ``tolerances`` dictionaries are merged key by key.

        Args:
            flags: Flag values keyed by RunConfig field name.
            config_path: JSON config file; overrides the one given at construction.

        Returns:
            ValidationResult with any warnings.

        Raises:
            ConfigurationError: If the file cannot be read or the merged values are invalid.
        """
        merged: Dict[str, Any] = {k: v for k, v in (flags or {}).items() if v is not None}
        path = Path(config_path) if config_path else self._config_path
        if path is not None:
            file_data = self._parse_source(path)
            tolerances = {**merged.get("tolerances", {}), **file_data.get("tolerances", {})}
            merged.update(file_data)
            if tolerances:
                merged["tolerances"] = tolerances
            logger.info(f"Loaded configuration from {path}")

        result, config = self._validate_run_config(merged)
        if config is None:
            raise ConfigurationError(
                "Run configuration validation failed", validation_result=result
            )
        self._configuration = config
        self._is_loaded = True
        for warning in result.warnings:
            logger.warning(warning)
        return result

    def _validate_run_config(
        self, data: Mapping[str, Any]
    ) -> tuple[ValidationResult, Optional[RunConfig]]:
        """Validate raw values, converting pydantic errors into prefixed messages."""
        result = ValidationResult(is_valid=True)
        try:
            config = RunConfig(**data)
        except ValidationError as e:
            for error in e.errors():
                where = ".".join(str(part) for part in error["loc"]) or "config"
                result.add_error(f"RunConfig.{where}: {error['msg']}")
            return result, None

        if config.trials < FEW_TRIALS:
            result.add_warning(
                f"RunConfig.trials: only {config.trials} random trials per identity"
            )
        cpus = os.cpu_count() or 1
        if config.jobs > cpus:
            result.add_warning(f"RunConfig.jobs: {config.jobs} workers exceed {cpus} CPUs")
        if config.grassmannian and config.facets:
            result.add_warning("RunConfig.grassmannian: ignored because facets are given")
        return result, config

    def _parse_source(self, source: Union[str, Path]) -> Dict[str, Any]:
        """Parse a JSON configuration file."""
        path = Path(source)
        if not path.exists():
            raise ConfigurationError(f"Configuration file not found: {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Configuration file is not valid JSON: {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError(f"Configuration file must hold a JSON object: {path}")
        return data

    def save(self, path: Union[str, Path]) -> None:
        """Save the current configuration as JSON."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")

    def reset(self) -> None:
        """Reset configuration to defaults."""
        self._configuration = RunConfig()
        self._is_loaded = False

    def to_dict(self) -> Dict[str, Any]:
        """Export current configuration as a dictionary."""
        return self._configuration.model_dump(mode="json")
