"""Reading and validating the measurement CLI's delimited output.

The CSV schema is a fixed contract: 19 named columns, '#'-prefixed metadata
lines on top, floats serialized with repr (non-finite values as the literal
inf/-inf/nan tokens), and RFC 4180 quoting around mode labels that embed
commas.  Everything off-contract raises DatasetError so the command line can
exit with a message instead of drawing from garbage.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

__all__ = ["CSV_SCHEMA", "NUMERIC_COLUMNS", "DatasetError", "PanelData", "read_panel"]

CSV_SCHEMA = (
    "s",
    "theta",
    "phi",
    "mode",
    "class",
    "wv_re",
    "wv_im",
    "x_mean",
    "y_mean",
    "px_mean",
    "x_var",
    "y_var",
    "px_var",
    "norm_coef",
    "ps_paper",
    "ps_exact",
    "snr_x",
    "snr_y",
    "error",
)

NUMERIC_COLUMNS = frozenset(CSV_SCHEMA) - {"mode", "class", "error"}


class DatasetError(Exception):
    """A CSV that is missing, empty, or does not follow the schema."""


@dataclass(frozen=True)
class PanelData:
    """One panel's worth of rows plus the '#' metadata that describes it."""

    path: str
    metadata: dict
    rows: tuple

    @property
    def stem(self) -> str:
        return os.path.splitext(os.path.basename(self.path))[0]

    @property
    def value_column(self) -> str:
        column = self.metadata.get("value", "snr_x")
        if column not in NUMERIC_COLUMNS:
            raise DatasetError(f"{self.path}: metadata names unknown value column {column!r}")
        return column

    def plottable_rows(self) -> list:
        """Rows that carry data: empty error column and a finite value cell."""
        column = self.value_column
        return [
            row
            for row in self.rows
            if not row["error"] and math.isfinite(row[column])
        ]


def _parse_metadata(line: str, meta: dict) -> None:
    body = line.lstrip("#").strip()
    key, sep, value = body.partition(":")
    if sep:
        # first colon only; values like range specs carry their own colons
        meta[key.strip()] = value.strip()


def _parse_row(cells: list, path: str, line_no: int) -> dict:
    if len(cells) != len(CSV_SCHEMA):
        raise DatasetError(
            f"{path}:{line_no}: expected {len(CSV_SCHEMA)} fields, got {len(cells)}"
        )
    row = dict(zip(CSV_SCHEMA, cells))
    for column in NUMERIC_COLUMNS:
        try:
            row[column] = float(row[column])
        except ValueError:
            raise DatasetError(
                f"{path}:{line_no}: non-numeric {column} value {row[column]!r}"
            ) from None
    return row


def read_panel(path: str) -> PanelData:
    """Load one panel CSV, enforcing the full schema contract."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            raw_lines = fh.read().splitlines()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from None

    meta: dict = {}
    data_lines: list[tuple[int, str]] = []
    for i, line in enumerate(raw_lines, start=1):
        if line.startswith("#"):
            _parse_metadata(line, meta)
        elif line.strip():
            data_lines.append((i, line))

    if not data_lines:
        raise DatasetError(f"{path}: empty dataset, nothing to render")

    header_no, header_line = data_lines[0]
    header = next(csv.reader([header_line]))
    if tuple(header) != CSV_SCHEMA:
        raise DatasetError(
            f"{path}:{header_no}: header does not match the fixed schema "
            f"(got {','.join(header[:5])}...)"
        )
    if len(data_lines) == 1:
        raise DatasetError(f"{path}: header but no data rows")

    rows = []
    for line_no, line in data_lines[1:]:
        cells = next(csv.reader([line]))
        rows.append(_parse_row(cells, path, line_no))
    return PanelData(path=path, metadata=meta, rows=tuple(rows))
