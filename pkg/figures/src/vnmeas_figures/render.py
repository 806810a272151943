"""Panel rendering: the drawing half of the package.

One CSV becomes one image.  Output is deterministic so re-rendering into the
same directory overwrites files byte for byte: SVG text stays text (no font
paths), element ids are salted with a fixed string, and no timestamps are
embedded.
"""

from __future__ import annotations

import glob
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .dataset import DatasetError, PanelData, read_panel

__all__ = ["render", "render_panel", "resolve_targets"]

_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "vnmeas-figures",
    "figure.figsize": (6.4, 4.8),
}


def _title(panel: PanelData, parts: list) -> str:
    meta = panel.metadata
    head = f"{meta.get('figure', panel.stem)}({meta.get('panel', '?')})"
    bits = [head]
    if "class" in meta:
        bits.append(meta["class"])
    bits.extend(parts)
    if "phi" in meta:
        bits.append(f"phi = {float(meta['phi']):.4g}")
    return ", ".join(bits)


def _draw_lines(fig, panel: PanelData) -> None:
    rows = panel.plottable_rows()
    if not rows:
        raise DatasetError(f"{panel.path}: no plottable rows (all errored or non-finite)")
    value = panel.value_column
    series = panel.metadata.get("series", "mode")
    groups: dict = {}
    for row in rows:
        if series == "theta":
            key = f"theta = {row['theta']:.4g}"
        elif series == "mode":
            key = row["mode"]
        else:
            key = "all points"
        groups.setdefault(key, ([], []))
        groups[key][0].append(row["s"])
        groups[key][1].append(row[value])
    ax = fig.add_subplot()
    for key, (xs, ys) in groups.items():
        ax.plot(xs, ys, label=key)
    ax.set_xlabel("s")
    ax.set_ylabel(value)
    ax.legend()
    parts = []
    if "mode" in panel.metadata:
        parts.append(f"mode {panel.metadata['mode']}")
    if "weak_value" in panel.metadata:
        parts.append(f"weak value {panel.metadata['weak_value']}")
    ax.set_title(_title(panel, parts))


def _draw_surface(fig, panel: PanelData) -> None:
    rows = panel.plottable_rows()
    if not rows:
        raise DatasetError(f"{panel.path}: no plottable rows (all errored or non-finite)")
    value = panel.value_column
    cells: dict = {}
    s_axis: list = []
    theta_axis: list = []
    for row in rows:
        key = (row["s"], row["theta"])
        if key in cells:
            raise DatasetError(f"{panel.path}: duplicate surface point s={key[0]} theta={key[1]}")
        cells[key] = row[value]
        if row["s"] not in s_axis:
            s_axis.append(row["s"])
        if row["theta"] not in theta_axis:
            theta_axis.append(row["theta"])
    height = np.empty((len(s_axis), len(theta_axis)))
    for i, s in enumerate(s_axis):
        for j, theta in enumerate(theta_axis):
            if (s, theta) not in cells:
                raise DatasetError(
                    f"{panel.path}: surface grid incomplete, missing s={s} theta={theta}"
                )
            height[i, j] = cells[(s, theta)]
    mesh_s, mesh_theta = np.meshgrid(np.asarray(s_axis), np.asarray(theta_axis), indexing="ij")
    ax = fig.add_subplot(projection="3d")
    ax.plot_surface(mesh_s, mesh_theta, height, cmap="viridis", linewidth=0)
    ax.set_xlabel("s")
    ax.set_ylabel("theta")
    ax.set_zlabel(value)
    parts = [f"mode {panel.metadata['mode']}"] if "mode" in panel.metadata else []
    ax.set_title(_title(panel, parts))


def render_panel(panel: PanelData, out_dir: str, fmt: str = "svg") -> str:
    """Draw one panel and write <stem>.<fmt> into out_dir; returns the path."""
    if fmt not in ("svg", "png"):
        raise DatasetError(f"unsupported format {fmt!r}")
    kind = panel.metadata.get("plot", "lines")
    out_path = os.path.join(out_dir, f"{panel.stem}.{fmt}")
    with plt.rc_context(_RC):
        fig = plt.figure()
        try:
            if kind == "surface":
                _draw_surface(fig, panel)
            elif kind == "lines":
                _draw_lines(fig, panel)
            else:
                raise DatasetError(f"{panel.path}: unknown plot kind {kind!r}")
            save_kwargs = {"format": fmt}
            if fmt == "svg":
                # suppress the creation timestamp so reruns are byte-identical
                save_kwargs["metadata"] = {"Date": None}
            fig.savefig(out_path, **save_kwargs)
        finally:
            plt.close(fig)
    return out_path


def resolve_targets(targets, in_dir: str = ".") -> list:
    """Expand figure names to their panel CSVs; pass explicit paths through."""
    paths: list = []
    for target in targets:
        if target.endswith(".csv"):
            if not os.path.exists(target):
                raise DatasetError(f"no such file: {target}")
            paths.append(target)
            continue
        matches = sorted(glob.glob(os.path.join(in_dir, f"{target}_*.csv")))
        if not matches:
            raise DatasetError(f"no panel CSVs matching {target}_*.csv in {in_dir}")
        paths.extend(matches)
    return paths


def render(targets, in_dir: str = ".", out_dir: str | None = None, fmt: str = "svg") -> list:
    """Render every panel behind the given figure names or CSV paths."""
    paths = resolve_targets(targets, in_dir)
    destination = out_dir if out_dir is not None else in_dir
    os.makedirs(destination, exist_ok=True)
    return [render_panel(read_panel(path), destination, fmt) for path in paths]
