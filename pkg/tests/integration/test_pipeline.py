"""Integration tests for the verification suite."""

import pytest

from poset_hdx.config import SUITE_STEPS, RunConfig
from poset_hdx.constructors import FacetList, posetification_weights, posetify
from poset_hdx.models.poset import WeightScheme
from poset_hdx.pipeline import VerificationSuite

from tests.fixtures import posets


@pytest.fixture
def suite():
    """Suite with few trials and a fixed seed."""
    return VerificationSuite(RunConfig(trials=5, seed=3))


class TestVerificationSuite:
    """Tests for complete suite runs."""

    def test_delta4_full_run(self, suite, delta4):
        """Test that every check passes on delta4."""
        result = suite.run(*delta4)
        assert result.success, [c.to_dict() for c in result.failed] + result.errors
        assert result.failed == []
        assert result.by_theorem("validation")[0].verdict
        assert len(result.by_theorem("basic_localization")) == 6
        assert [c.details["l"] for c in result.by_theorem("alev_lau")] == [0, 1]
        assert result.by_theorem("trickling")[0].verdict
        assert result.by_theorem("posetification") == []
        assert result.metadata["level_sizes"] == [1, 5, 10, 10]
        assert "regularity" in result.metadata

    def test_only_selected_steps(self, suite, delta4):
        """Test a restricted run."""
        result = suite.run(*delta4, only=["validation", "properties"])
        theorems = {c.theorem for c in result.checks}
        assert theorems == {
            "validation",
            "ul_constant_relation",
            "predicted_constants",
            "al_deviation",
            "tl_sums",
        }
        assert result.success

    def test_non_standard_scheme_skips(self, suite, perturbed):
        """Test that unmet hypotheses become skipped checks with warnings."""
        result = suite.run(*perturbed, only=["towards-ud-du"])
        towards = result.by_theorem("towards_ud_du")
        assert towards and all(c.verdict is None for c in towards)
        assert any(w.startswith("towards_ud_du:") for w in result.warnings)
        assert all(c.verdict for c in result.by_theorem("correction_bound"))
        assert result.success

    def test_invalid_weights_stop_the_run(self, suite, delta4):
        """Test that failed validation ends the run."""
        poset, weights = delta4
        broken = WeightScheme(weights.m * 2.0, weights.p)
        result = suite.run(poset, broken)
        assert not result.success
        assert len(result.checks) == 1
        assert "Poset or weights are invalid; remaining steps not run" in result.errors

    def test_posetification_origin(self, suite):
        """Test the posetification step on a posetified triangle."""
        facets = FacetList.from_iterable(posets.TRIANGLE_FACETS)
        poset, _ = posetify(facets, 2)
        weights = posetification_weights(poset, facets, 2)
        origin = {"kind": "posetification", "q": 2, "facets": [[1, 2, 3]]}
        result = suite.run(poset, weights, only=["posetification"], origin=origin)
        check = result.by_theorem("posetification")[0]
        assert check.verdict
        assert check.details["oracle_agreement"] is True
        assert result.metadata["origin"] == {"kind": "posetification", "q": 2}

    def test_posetification_requested_without_origin(self, suite, delta4):
        """Test that an explicit request without origin is skipped."""
        config = RunConfig(trials=5, only=["posetification"])
        result = VerificationSuite(config).run(*delta4)
        assert result.by_theorem("posetification")[0].verdict is None

    def test_stats(self, suite, triangle):
        """Test execution statistics."""
        suite.run(*triangle, only=["validation"])
        suite.run(*triangle, only=["validation"])
        stats = suite.get_stats()
        assert stats.total_executions == 2
        assert stats.successful_executions == 2
        assert "validation" in suite.get_performance_stats()

    def test_steps_cover_all_names(self, suite):
        """Test that every configured step has an implementation."""
        assert set(suite._steps) == set(SUITE_STEPS)
