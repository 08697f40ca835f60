"""Deterministic CSV/JSON report writing with environment stamps."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from . import __version__


def fmt(value) -> str:
    """Shortest round-trip text for floats; plain str otherwise."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def environment_stamp() -> dict:
    return {
        "tool": "bergman-lab",
        "version": __version__,
        "float_format": f"IEEE-754 binary64 ({sys.float_info.mant_dig}-bit mantissa)",
        "numpy": np.__version__,
    }


def write_summary(path: Path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
