"""Delimited output helpers: CSV with '.' decimals, LF endings, header row,
floats at 17 significant digits (round-trip exact)."""
from __future__ import annotations

import math
from pathlib import Path


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.17g}"
    return str(v)


def write_csv(path, rows: list[dict], columns: list[str] | None = None) -> None:
    """Write dict rows as CSV; column order comes from the first row unless
    given explicitly."""
    path = Path(path)
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(format_value(row[c]) for c in columns))
    path.write_text("\n".join(lines) + "\n", newline="\n")


def read_csv(path) -> list[dict]:
    """Minimal reader for our own CSV files (no quoting needed)."""
    lines = Path(path).read_text().strip().split("\n")
    header = lines[0].split(",")
    out = []
    for line in lines[1:]:
        out.append(dict(zip(header, line.split(","))))
    return out
