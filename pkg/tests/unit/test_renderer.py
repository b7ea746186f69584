"""Unit tests for the Markdown report renderer."""

import pytest

from poset_hdx.models.reports import BoundCheck
from poset_hdx.pipeline import SuiteResult
from poset_hdx.reporting import ReportRenderer


@pytest.fixture
def result():
    """A small suite result with a passing, a failing and a skipped check."""
    return SuiteResult(
        success=False,
        checks=[
            BoundCheck("alev_lau", 4 / 9, 4 / 9, True, {"l": 1}),
            BoundCheck("alev_lau", 0.375, 0.5, False, {"l": 0}),
            BoundCheck.skipped("towards_ud_du", "missing: exact property UL | AL", l=1),
        ],
        seed=7,
        trials=5,
        metadata={"d": 2, "level_sizes": [1, 5, 10, 10], "standard": True},
    )


class TestReportRenderer:
    """Tests for ReportRenderer."""

    def test_header(self, result):
        """Test the summary lines."""
        text = ReportRenderer().render(result, title="delta4.json")
        assert text.startswith("# delta4.json\n")
        assert "- Rank d: 2" in text
        assert "- Standard weights: yes" in text
        assert "- Seed: 7, trials per identity: 5" in text
        assert "- Checks: 3 (1 failed, 1 skipped)" in text
        assert "- Overall: **FAIL**" in text

    def test_groups_and_rows(self, result):
        """Test one section per theorem with formatted rows."""
        text = ReportRenderer().render(result)
        assert text.count("## alev_lau") == 1
        assert "| l=1 | 0.444444 | 0.444444 | pass |" in text
        assert "| l=0 | 0.375 | 0.5 | FAIL |" in text
        assert "| l=1 | n/a | n/a | skipped | missing: exact property UL \\| AL |" in text

    def test_errors_section(self, result):
        """Test that step errors are listed."""
        result.errors.append("Step trickle failed: boom")
        text = ReportRenderer().render(result)
        assert "## Errors" in text
        assert "- Step trickle failed: boom" in text

    def test_custom_template_dir(self, tmp_path, result):
        """Test rendering with a caller-supplied template."""
        (tmp_path / "report.md.j2").write_text("{{ title }}: {{ failed }}\n", encoding="utf-8")
        text = ReportRenderer(str(tmp_path)).render(result, title="custom")
        assert text == "custom: 1\n"
