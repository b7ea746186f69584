"""Human-readable reports of verification runs."""

from .renderer import ReportRenderer

__all__ = ["ReportRenderer"]
