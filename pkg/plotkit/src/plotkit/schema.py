"""CSV schema validation for the simulator's output files.

Every reader tolerates the leading ``# manifest=...`` reference line, checks
the header against the documented column set and reports problems by file
and column name.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


class SchemaError(ValueError):
    """Input file violates its documented schema; names file and column."""

    def __init__(self, path: str | Path, column: str, message: str):
        self.path = str(path)
        self.column = column
        super().__init__(f"{path}: column '{column}': {message}")


@dataclass(frozen=True)
class Table:
    path: str
    columns: tuple[str, ...]
    data: dict[str, list[float]]

    def __getitem__(self, column: str) -> list[float]:
        return self.data[column]

    def __len__(self) -> int:
        return len(next(iter(self.data.values()), []))


SCHEMAS: dict[str, dict[str, tuple[str, ...]]] = {
    "timeseries": {
        "required": ("t", "ergotropy"),
        "optional": ("energy", "excitation", "trace_distance"),
    },
    "survival": {"required": ("delta", "gamma0", "e_res"), "optional": ()},
    "analytic_curve": {"required": ("gamma0", "delta_star"), "optional": ()},
    "scaling": {
        "required": ("n", "delta_opt", "e_res_opt"),
        "optional": ("boundary_flag",),
    },
    "advantage": {"required": ("n", "e_n", "a_n"), "optional": ()},
    "rwa": {"required": ("n", "ratio", "usc_flag"), "optional": ()},
    "paradox": {"required": ("delta", "e_res", "blp"), "optional": ()},
}


def read_table(path: str | Path, schema: str) -> Table:
    """Load and validate one CSV against a named schema."""
    spec = SCHEMAS[schema]
    p = Path(path)
    if not p.exists():
        raise SchemaError(p, "<file>", "file does not exist")
    with open(p, newline="") as fh:
        rows = [r for r in csv.reader(fh)
                if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise SchemaError(p, "<header>", "file has no header row")
    header = [c.strip() for c in rows[0]]
    for col in spec["required"]:
        if col not in header:
            raise SchemaError(p, col, "required column is missing")
    known = set(spec["required"]) | set(spec["optional"])
    for col in header:
        if col not in known:
            raise SchemaError(p, col, f"unexpected column for schema '{schema}'")
    data: dict[str, list[float]] = {c: [] for c in header}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(p, "<row>",
                              f"line {lineno}: expected {len(header)} fields, "
                              f"got {len(row)}")
        for col, cell in zip(header, row):
            try:
                data[col].append(float(cell))
            except ValueError as exc:
                raise SchemaError(p, col,
                                  f"line {lineno}: not numeric: {cell!r}") from exc
    if not data[header[0]]:
        raise SchemaError(p, header[0], "file has no data rows")
    return Table(path=str(p), columns=tuple(header), data=data)
