"""Columnar text I/O.

All time series are written as headered CSV: comma separator, '.' decimal
point, LF line endings, one row per time step.  Floats are printed with
%.17g so a read-back reproduces the in-memory doubles exactly, and a rerun
with the same inputs produces byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    rows = np.atleast_2d(np.asarray(rows))
    if rows.size and rows.shape[1] != len(header):
        raise ValueError(f"{rows.shape[1]} columns for {len(header)} header names")
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(x) for x in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a headered CSV back into (header, float matrix)."""
    path = Path(path)
    with open(path, "r", newline="\n") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path} is empty")
    header = lines[0].split(",")
    rows = []
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(header):
            raise ValueError(f"{path}:{k} has {len(parts)} columns, header has {len(header)}")
        rows.append([float(p) for p in parts])
    data = np.asarray(rows, dtype=float) if rows else np.empty((0, len(header)))
    return header, data


def component_names(prefix: str, count: int) -> list[str]:
    width = max(3, len(str(count - 1)))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]
