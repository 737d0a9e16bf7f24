"""Reading and validating su3squeeze CSV data files.

Files carry `#` metadata lines (tool version, command, config echo), a
header row, data rows, and optional `#` footer records.  No numerical
work happens here beyond parsing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Input file does not match the documented CSV schema."""


@dataclass
class DataFile:
    path: Path
    command: str
    config: dict
    columns: list
    data: np.ndarray            # floats, text columns dropped
    text_columns: dict = field(default_factory=dict)
    footer: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        if name in self.text_columns:
            return self.text_columns[name]
        try:
            return self.data[:, self.columns.index(name)]
        except ValueError as exc:
            raise SchemaError(f"{self.path}: missing column {name!r}") from exc


def _parse_config(line: str) -> dict:
    out = {}
    for token in line.split(":", 1)[1].split():
        if "=" in token:
            key, value = token.split("=", 1)
            out[key] = value
    return out


def read_datafile(path) -> DataFile:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file {path} does not exist")
    command, config, footer = "", {}, {}
    columns, rows = None, []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("command:"):
                command = body.split(":", 1)[1].strip()
            elif body.startswith("config:"):
                config = _parse_config(body)
            elif "=" in body and columns is not None:
                key, value = body.split("=", 1)
                footer[key.strip()] = value.strip()
            continue
        if not line.strip():
            continue
        if columns is None:
            columns = line.split(",")
        else:
            rows.append(line.split(","))
    if columns is None or not rows:
        raise SchemaError(f"{path}: no data rows")
    numeric_idx, text_cols = [], {}
    for j, name in enumerate(columns):
        try:
            float(rows[0][j])
            numeric_idx.append(j)
        except (ValueError, IndexError):
            text_cols[name] = np.array([r[j] for r in rows])
    data = np.full((len(rows), len(columns)), np.nan)
    for i, row in enumerate(rows):
        if len(row) != len(columns):
            raise SchemaError(f"{path}: row {i} has {len(row)} fields, "
                              f"expected {len(columns)}")
        for j in numeric_idx:
            data[i, j] = float(row[j])
    return DataFile(path=path, command=command, config=config, columns=columns,
                    data=data, text_columns=text_cols, footer=footer)


def require_columns(df: DataFile, names) -> None:
    missing = [n for n in names if n not in df.columns]
    if missing:
        raise SchemaError(f"{df.path}: missing columns {missing} "
                          f"(found {df.columns})")


def slice_grid(df: DataFile):
    """(alpha2 nodes, beta2 nodes, W as a 2-D array) from a wigner-slice file."""
    require_columns(df, ("alpha2", "beta2", "W"))
    a2 = df.column("alpha2")
    b2 = df.column("beta2")
    w = df.column("W")
    a2_nodes = np.unique(a2)
    b2_nodes = np.unique(b2)
    if a2_nodes.size * b2_nodes.size != w.size:
        raise SchemaError(f"{df.path}: slice rows do not form a product grid")
    grid = np.full((a2_nodes.size, b2_nodes.size), np.nan)
    ia = np.searchsorted(a2_nodes, a2)
    ib = np.searchsorted(b2_nodes, b2)
    grid[ia, ib] = w
    if np.any(np.isnan(grid)):
        raise SchemaError(f"{df.path}: incomplete slice grid")
    return a2_nodes, b2_nodes, grid


def curve_style(df: DataFile):
    """(label, line kwargs) per the figure convention: solid quantum line,
    thick dashed exact-kernel transport, thin dashed Gaussian transport."""
    if df.command == "exact":
        return "quantum", {"linestyle": "-", "linewidth": 1.8, "color": "black"}
    backend = df.config.get("backend", "")
    if df.command == "semiclassical":
        if backend in ("exact", "exact-kernel"):
            return ("classical (exact WF)",
                    {"linestyle": "--", "linewidth": 2.4, "color": "tab:blue"})
        return ("classical (Gaussian WF)",
                {"linestyle": "--", "linewidth": 1.0, "color": "tab:red"})
    raise SchemaError(f"{df.path}: not a squeezing-curve file "
                      f"(command {df.command!r})")
