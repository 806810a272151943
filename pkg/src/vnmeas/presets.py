"""Named data presets behind the `figure` subcommand.

Each figure is a fixed set of panels; each panel is a fixed, ordered list of
settings plus the metadata a renderer needs to reconstruct the plot (kind,
series key, frozen angles).  Everything here is data selection; rendering
is a separate component that consumes the CSV files these produce.

Conventions across the set: position SNR panels fix phi = 0, lateral SNR
panels live at phi = pi/2 where the lateral signal is largest; surfaces run
the coupling to 4 and line plots to 10, both in steps of 0.1.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import ConfigError
from .modes import PointerMode
from .settings import MeasurementSetting
from .sweeps import run_settings, write_csv

__all__ = ["FigurePanel", "list_figures", "figure_panels", "generate_figure"]

_S_LINE = tuple(i / 10 for i in range(101))
_S_SURF = tuple(i / 10 for i in range(41))
_THETA_SURF = tuple(k * math.pi / 32 for k in range(1, 32))
_THETA_LINES = (math.pi / 4, math.pi / 2, 3 * math.pi / 4)
_HALF_PI = math.pi / 2

_HG_SERIES = tuple(PointerMode.hg(n) for n in range(4))
_LG_SERIES = (PointerMode.lg(0, 0), PointerMode.lg(0, 1), PointerMode.lg(0, 2), PointerMode.lg(1, 1))
_LG_Y_SERIES = tuple(PointerMode.lg(0, l) for l in (1, 2, 3))

_WV_X = (0.5 + 0j, 0.5 + 1j, 5 + 0j, 5 + 5j)
_WV_Y4 = (1j, 0.5 + 1j, 5j, 5 + 5j)
_WV_Y6 = (1j, 0.5 + 1j, 1 + 1j, 5j, 0.5 + 5j, 5 + 5j)


@dataclass(frozen=True)
class FigurePanel:
    figure: str
    panel: str
    settings: tuple[MeasurementSetting, ...]
    metadata: dict


def _wv_text(wv: complex) -> str:
    return f"{wv.real},{wv.imag}"


def _axis_text(values: tuple[float, ...]) -> str:
    return f"{values[0]}:{values[-1]}:{values[1] - values[0]}" if len(values) > 1 else repr(values[0])


def _surface_panels(
    figure: str, op_class: str, modes: tuple[PointerMode, ...], value: str, phi: float
) -> list[FigurePanel]:
    panels = []
    for i, mode in enumerate(modes):
        settings = tuple(
            MeasurementSetting.from_selection(mode, op_class, theta, phi, s)
            for s in _S_SURF
            for theta in _THETA_SURF
        )
        panels.append(
            FigurePanel(
                figure=figure,
                panel=chr(ord("a") + i),
                settings=settings,
                metadata={
                    "figure": figure,
                    "panel": chr(ord("a") + i),
                    "plot": "surface",
                    "value": value,
                    "series": "none",
                    "class": op_class,
                    "mode": mode.label(),
                    "phi": repr(phi),
                    "s_axis": _axis_text(_S_SURF),
                    "theta_axis": _axis_text(_THETA_SURF),
                },
            )
        )
    return panels


def _line_panels_by_weak_value(
    figure: str,
    op_class: str,
    weak_values: tuple[complex, ...],
    series_modes: tuple[PointerMode, ...],
    value: str,
) -> list[FigurePanel]:
    panels = []
    for i, wv in enumerate(weak_values):
        settings = tuple(
            MeasurementSetting.from_weak_value(mode, op_class, wv, s)
            for s in _S_LINE
            for mode in series_modes
        )
        panels.append(
            FigurePanel(
                figure=figure,
                panel=chr(ord("a") + i),
                settings=settings,
                metadata={
                    "figure": figure,
                    "panel": chr(ord("a") + i),
                    "plot": "lines",
                    "value": value,
                    "series": "mode",
                    "class": op_class,
                    "weak_value": _wv_text(wv),
                    "s_axis": _axis_text(_S_LINE),
                },
            )
        )
    return panels


def _fig6_panels() -> list[FigurePanel]:
    """Lateral SNR against coupling at phi = pi/2 for the low-order vortex
    modes, one line per selection angle."""
    panels = []
    modes = (PointerMode.lg(0, 1), PointerMode.lg(0, 2), PointerMode.lg(1, 1))
    for i, mode in enumerate(modes):
        settings = tuple(
            MeasurementSetting.from_selection(mode, "involutory", theta, _HALF_PI, s)
            for s in _S_LINE
            for theta in _THETA_LINES
        )
        panels.append(
            FigurePanel(
                figure="fig6",
                panel=chr(ord("a") + i),
                settings=settings,
                metadata={
                    "figure": "fig6",
                    "panel": chr(ord("a") + i),
                    "plot": "lines",
                    "value": "snr_y",
                    "series": "theta",
                    "class": "involutory",
                    "mode": mode.label(),
                    "phi": repr(_HALF_PI),
                    "theta_list": ",".join(repr(t) for t in _THETA_LINES),
                    "s_axis": _axis_text(_S_LINE),
                },
            )
        )
    return panels


def _build_figures() -> dict:
    return {
        "fig1": lambda: _surface_panels(
            "fig1", "involutory", tuple(PointerMode.hg(n) for n in range(3)), "snr_x", 0.0
        ),
        "fig2": lambda: _line_panels_by_weak_value("fig2", "involutory", _WV_X, _HG_SERIES, "snr_x"),
        "fig3": lambda: _line_panels_by_weak_value("fig3", "projector", _WV_X, _HG_SERIES, "snr_x"),
        "fig4": lambda: _surface_panels(
            "fig4",
            "involutory",
            (PointerMode.lg(0, 0), PointerMode.lg(1, 1), PointerMode.lg(2, 2)),
            "snr_x",
            0.0,
        ),
        "fig5": lambda: _line_panels_by_weak_value("fig5", "involutory", _WV_X, _LG_SERIES, "snr_x"),
        "fig6": _fig6_panels,
        "fig7": lambda: _line_panels_by_weak_value("fig7", "involutory", _WV_Y4, _LG_Y_SERIES, "snr_y"),
        "fig8": lambda: _line_panels_by_weak_value("fig8", "projector", _WV_X, _LG_SERIES, "snr_x"),
        "fig9": lambda: _line_panels_by_weak_value("fig9", "projector", _WV_Y6, _LG_Y_SERIES, "snr_y"),
    }


_FIGURES = _build_figures()


def list_figures() -> tuple[str, ...]:
    return tuple(sorted(_FIGURES))


def figure_panels(name: str) -> list[FigurePanel]:
    if name not in _FIGURES:
        raise ConfigError(f"unknown figure {name!r}; available: {', '.join(list_figures())}")
    return _FIGURES[name]()


def generate_figure(
    name: str,
    out_dir: str = ".",
    jobs: int = 1,
    ps_convention: str = "paper",
    n_measurements: int = 1,
) -> list[str]:
    """Evaluate all panels of one figure and write one CSV per panel.

    Returns the written paths, ordered by panel letter.  Files are
    deterministic: rerunning into the same directory reproduces them byte
    for byte.
    """
    paths = []
    for panel in figure_panels(name):
        records = run_settings(panel.settings, n_measurements, ps_convention, jobs)
        metadata = dict(panel.metadata)
        metadata["ps_convention"] = ps_convention
        metadata["n_measurements"] = n_measurements
        metadata["generator"] = "vnmeas"
        path = os.path.join(out_dir, f"{panel.figure}_{panel.panel}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            write_csv(records, fh, metadata)
        paths.append(path)
    return paths
