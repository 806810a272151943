"""Rendering side of the vnmeas toolchain.

Consumes the measurement CLI's figure-preset CSV files and draws one image
per panel.  Strictly a view layer: every number comes out of a CSV, nothing
is recomputed here.
"""

from .dataset import CSV_SCHEMA, DatasetError, PanelData, read_panel
from .render import render, render_panel

__all__ = [
    "CSV_SCHEMA",
    "DatasetError",
    "PanelData",
    "read_panel",
    "render",
    "render_panel",
]
