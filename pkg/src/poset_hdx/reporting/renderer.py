"""Markdown rendering of verification suite results."""

import os
from typing import Any, Dict, List, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from ..pipeline import SuiteResult


def _fmt(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _verdict(value: Optional[bool]) -> str:
    if value is None:
        return "skipped"
    return "pass" if value else "FAIL"


class ReportRenderer:
    """
    Renders a suite run as a Markdown report.

    Uses the Jinja2 templates shipped in ``reporting/templates``.
    """

    def __init__(self, template_dir: Optional[str] = None):
        """
        Initialize the report renderer.

        Args:
            template_dir: Directory containing Jinja2 templates.
                If not provided, uses the packaged templates.
        """
        if template_dir is None:
            template_dir = os.path.join(os.path.dirname(__file__), "templates")
        self.template_dir = template_dir
        self.env = Environment(
            loader=FileSystemLoader(template_dir),
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.env.filters["fmt"] = _fmt
        self.env.filters["verdict"] = _verdict

    def render(self, result: SuiteResult, title: str = "Verification report") -> str:
        """
        Render the Markdown report of ``result``.

        Args:
            result: Suite run to describe.
            title: Report heading, usually the poset file name.

        Returns:
            Markdown text.
        """
        template = self.env.get_template("report.md.j2")
        return template.render(
            title=title,
            result=result,
            metadata=result.metadata,
            groups=self._group_checks(result),
            failed=len(result.failed),
            skipped=len(result.skipped),
        )

    def _group_checks(self, result: SuiteResult) -> List[Dict[str, Any]]:
        """Checks grouped by theorem in first-seen order."""
        groups: Dict[str, List[Dict[str, Any]]] = {}
        for check in result.checks:
            scope = {k: check.details[k] for k in ("k", "l", "j") if k in check.details}
            groups.setdefault(check.theorem, []).append(
                {
                    "scope": ", ".join(f"{k}={v}" for k, v in scope.items()) or "-",
                    "bound": check.bound,
                    "measured": check.measured,
                    "verdict": check.verdict,
                    "reason": check.details.get("reason"),
                }
            )
        return [{"theorem": name, "rows": rows} for name, rows in groups.items()]
