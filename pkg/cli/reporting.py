"""Formatting of analysis reports for stdout."""

from collections.abc import Iterable
from dataclasses import asdict

import numpy as np

Entry = tuple[str, object]


def format_value(value: object) -> str:
    """Render one report value with a stable spelling."""
    if value is None:
        return "none"
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        return f"{float(value):.6f}"
    if isinstance(value, np.ndarray):
        return format_counts(value)
    return str(value)


def format_counts(counts: Iterable[int]) -> str:
    """Join histogram counts with commas."""
    return ",".join(str(int(count)) for count in counts)


def report_entries(report: object, prefix: str = "") -> list[Entry]:
    """Flatten a report dataclass into ``(name, value)`` entries, optionally prefixed."""
    return [(f"{prefix}{name}", value) for name, value in asdict(report).items()]


def format_report(entries: Iterable[Entry], report_format: str = "text") -> str:
    """Format entries one per line.

    ``text`` aligns values after ``name:``; ``kv`` writes ``name=value``.
    """
    entries = list(entries)
    if report_format == "kv":
        return "\n".join(f"{name}={format_value(value)}" for name, value in entries)
    width = max((len(name) for name, _ in entries), default=0) + 1
    return "\n".join(f"{name + ':':<{width}} {format_value(value)}" for name, value in entries)
