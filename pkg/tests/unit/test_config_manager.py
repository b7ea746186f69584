"""Unit tests for the Configuration Manager."""

import json

import pytest
from pydantic import ValidationError

from poset_hdx.config import (
    MAX_ELEMENTS_ENV,
    ConfigurationError,
    ConfigurationManager,
    RunConfig,
    Tolerances,
    ValidationResult,
    default_max_elements,
)
from poset_hdx.constructors.grassmannian import DEFAULT_MAX_ELEMENTS


class TestLoading:
    """Tests for merging flags with config files."""

    def test_defaults(self):
        """Test a fresh manager."""
        manager = ConfigurationManager()
        assert not manager.is_loaded
        assert manager.configuration.trials == 100
        assert manager.configuration.tolerances.identity == pytest.approx(1e-9)

    def test_flags_only(self):
        """Test that None flags count as not given."""
        manager = ConfigurationManager()
        result = manager.load({"command": "verify", "trials": 20, "seed": None, "q": 4})
        assert result.is_valid
        assert manager.is_loaded
        assert manager.configuration.trials == 20
        assert manager.configuration.q == 4
        assert manager.configuration.seed == RunConfig().seed

    def test_file_overrides_flags(self, tmp_path):
        """Test that file values take precedence over flags."""
        path = tmp_path / "run.json"
        path.write_text(
            json.dumps({"trials": 50, "tolerances": {"bound": 1e-6}}), encoding="utf-8"
        )
        manager = ConfigurationManager(path)
        manager.load({"trials": 20, "tolerances": {"identity": 1e-7}})
        config = manager.configuration
        assert config.trials == 50
        assert config.tolerances.bound == pytest.approx(1e-6)
        assert config.tolerances.identity == pytest.approx(1e-7)

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises."""
        manager = ConfigurationManager()
        with pytest.raises(ConfigurationError) as exc_info:
            manager.load(config_path=tmp_path / "absent.json")
        assert "not found" in exc_info.value.message

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON raises."""
        path = tmp_path / "broken.json"
        path.write_text("{trials: ", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            ConfigurationManager().load(config_path=path)

    def test_non_object(self, tmp_path):
        """Test that a JSON list is rejected."""
        path = tmp_path / "list.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigurationError) as exc_info:
            ConfigurationManager().load(config_path=path)
        assert "JSON object" in exc_info.value.message


class TestValidation:
    """Tests for field validation."""

    @pytest.mark.parametrize(
        "flags, field_name",
        [
            ({"q": 6}, "RunConfig.q"),
            ({"trials": 0}, "RunConfig.trials"),
            ({"jitter": 1.0}, "RunConfig.jitter"),
            ({"only": ["nonsense"]}, "RunConfig.only"),
            ({"eposet": "fitted"}, "RunConfig.eposet"),
            ({"operator": "laplacian"}, "RunConfig.operator"),
            ({"tolerances": {"identity": 0.0}}, "RunConfig.tolerances.identity"),
            ({"unknown_flag": 1}, "RunConfig.unknown_flag"),
        ],
    )
    def test_rejected_values(self, flags, field_name):
        """Test that invalid values are reported with their field."""
        manager = ConfigurationManager()
        with pytest.raises(ConfigurationError) as exc_info:
            manager.load(flags)
        errors = exc_info.value.validation_result.errors
        assert any(error.startswith(field_name) for error in errors)
        assert not manager.is_loaded

    def test_warnings(self):
        """Test warnings for few trials and ignored flags."""
        result = ConfigurationManager().load(
            {"trials": 3, "grassmannian": True, "facets": "x.facets"}
        )
        assert result.is_valid
        assert any("trials" in w for w in result.warnings)
        assert any("grassmannian" in w for w in result.warnings)

    def test_tolerances_are_frozen(self):
        """Test that tolerances cannot be mutated."""
        tolerances = Tolerances()
        with pytest.raises(ValidationError):
            tolerances.identity = 1.0


class TestMaxElements:
    """Tests for the resource cap."""

    def test_environment_override(self, monkeypatch):
        """Test that the environment variable sets the default cap."""
        monkeypatch.setenv(MAX_ELEMENTS_ENV, "500")
        assert default_max_elements() == 500
        assert RunConfig().max_elements == 500

    @pytest.mark.parametrize("raw", ["many", "0"])
    def test_bad_environment_value(self, monkeypatch, raw):
        """Test that unusable values fall back to the built-in cap."""
        monkeypatch.setenv(MAX_ELEMENTS_ENV, raw)
        assert default_max_elements() == DEFAULT_MAX_ELEMENTS

    def test_unset(self, monkeypatch):
        """Test the built-in cap."""
        monkeypatch.delenv(MAX_ELEMENTS_ENV, raising=False)
        assert default_max_elements() == DEFAULT_MAX_ELEMENTS


class TestExportAndReset:
    """Tests for saving and resetting configuration."""

    def test_save_round_trip(self, tmp_path):
        """Test that a saved configuration loads back unchanged."""
        manager = ConfigurationManager()
        manager.load({"command": "certify", "two_sided_nu": -0.34, "two_sided_lambda": -0.24})
        path = tmp_path / "nested" / "saved.json"
        manager.save(path)
        reloaded = ConfigurationManager()
        reloaded.load(config_path=path)
        assert reloaded.to_dict() == manager.to_dict()

    def test_reset(self):
        """Test reset to defaults."""
        manager = ConfigurationManager()
        manager.load({"trials": 12})
        manager.reset()
        assert not manager.is_loaded
        assert manager.configuration.trials == 100


class TestValidationResult:
    """Tests for ValidationResult."""

    def test_merge(self):
        """Test merging two results."""
        first = ValidationResult(is_valid=True, warnings=["w"])
        second = ValidationResult(is_valid=True)
        second.add_error("e")
        merged = first.merge(second)
        assert not merged.is_valid
        assert merged.errors == ["e"] and merged.warnings == ["w"]
