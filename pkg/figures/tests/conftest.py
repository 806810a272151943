"""Builders for synthetic panel CSVs used across the renderer tests."""

import csv
import io

import pytest

from vnmeas_figures.dataset import CSV_SCHEMA

_ROW_DEFAULTS = {"mode": "hg:0", "class": "involutory", "error": ""}


def make_panel_text(metadata, rows):
    """Assemble a schema-shaped CSV: '#' metadata lines, header, data rows.

    Row dicts only name the cells they care about; everything else is 0.0.
    The csv module does the quoting so comma-bearing mode labels survive.
    """
    buf = io.StringIO()
    for key, value in metadata.items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_SCHEMA)
    for row in rows:
        cells = {name: "0.0" for name in CSV_SCHEMA}
        cells.update(_ROW_DEFAULTS)
        for key, value in row.items():
            cells[key] = value if isinstance(value, str) else repr(float(value))
        writer.writerow([cells[name] for name in CSV_SCHEMA])
    return buf.getvalue()


def lines_metadata(**overrides):
    meta = {
        "figure": "figx",
        "panel": "a",
        "plot": "lines",
        "value": "snr_x",
        "series": "mode",
        "class": "involutory",
        "weak_value": "0.5,0.0",
        "s_axis": "0.0:10.0:0.1",
    }
    meta.update(overrides)
    return meta


def surface_metadata(**overrides):
    meta = {
        "figure": "figy",
        "panel": "b",
        "plot": "surface",
        "value": "snr_x",
        "series": "none",
        "class": "involutory",
        "mode": "hg:0",
    }
    meta.update(overrides)
    return meta


@pytest.fixture
def lines_csv(tmp_path):
    """Two modes, three couplings each; second mode label embeds a comma."""
    rows = []
    for mode in ("hg:0", "lg:0,1"):
        for k, s in enumerate((0.5, 1.0, 1.5)):
            rows.append({"mode": mode, "s": s, "snr_x": 0.1 * (k + 1)})
    path = tmp_path / "figx_a.csv"
    path.write_text(make_panel_text(lines_metadata(), rows))
    return path


@pytest.fixture
def surface_csv(tmp_path):
    rows = [
        {"s": s, "theta": theta, "snr_x": s + theta}
        for s in (0.5, 1.0)
        for theta in (0.3, 0.6)
    ]
    path = tmp_path / "figy_b.csv"
    path.write_text(make_panel_text(surface_metadata(), rows))
    return path
