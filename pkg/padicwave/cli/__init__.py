"""Command-line entry point."""

from __future__ import annotations

from .main import RunReport, app, cli

__all__ = ["RunReport", "app", "cli"]
