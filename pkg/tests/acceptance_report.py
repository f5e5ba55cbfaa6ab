"""Shared store for the acceptance-criteria summary lines."""

from __future__ import annotations

RESULTS: list[tuple[str, bool, str]] = []


def record(name: str, passed: bool, detail: str = "") -> None:
    RESULTS.append((name, passed, detail))
