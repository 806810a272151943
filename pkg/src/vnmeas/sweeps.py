"""Point evaluation and delimited output.

One evaluated grid point collects the analytic means, the oracle variances
and probability, the normalization coefficient, both SNRs and the residuals
between the two routes.  The CSV schema is a fixed public interface:

    s,theta,phi,mode,class,wv_re,wv_im,x_mean,y_mean,px_mean,
    x_var,y_var,px_var,norm_coef,ps_paper,ps_exact,snr_x,snr_y,error

Metadata rides in leading '#' comment lines.  Output is deterministic byte
for byte for a given configuration: floats are serialized with repr, no
timestamps, fixed row order, and parallel evaluation preserves order.
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from . import analytic
from .errors import VnmeasError
from .postselect import oracle_report
from .settings import MeasurementSetting
from .snr import snr_value

__all__ = [
    "CSV_COLUMNS",
    "PointRecord",
    "evaluate_point",
    "evaluate_point_guarded",
    "run_settings",
    "write_csv",
    "write_json",
]

CSV_COLUMNS = (
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


@dataclass(frozen=True)
class PointRecord:
    """Everything one evaluated setting exports.

    Means are the closed-form values, variances and ps_exact come from the
    oracle, and the *_resid fields hold the absolute gap between the two
    routes (not serialized; the verify pass consumes them).
    """

    s: float
    theta: float
    phi: float
    mode: str
    op_class: str
    weak_value: complex
    x_mean: float
    y_mean: float
    px_mean: float
    x_var: float
    y_var: float
    px_var: float
    norm_coef: float
    ps_paper: float
    ps_exact: float
    snr_x: float
    snr_y: float
    error: str = ""
    x_resid: float = math.nan
    y_resid: float = math.nan
    px_resid: float = math.nan
    norm_resid: float = math.nan

    def csv_values(self) -> tuple:
        return (
            self.s,
            self.theta,
            self.phi,
            self.mode,
            self.op_class,
            self.weak_value.real,
            self.weak_value.imag,
            self.x_mean,
            self.y_mean,
            self.px_mean,
            self.x_var,
            self.y_var,
            self.px_var,
            self.norm_coef,
            self.ps_paper,
            self.ps_exact,
            self.snr_x,
            self.snr_y,
            self.error,
        )


def evaluate_point(
    setting: MeasurementSetting,
    n_measurements: int = 1,
    ps_convention: str = "paper",
    dim_x: int | None = None,
) -> PointRecord:
    """Run both routes on one setting and assemble the full record.

    Raises on failure; sweep paths that must survive bad points wrap this
    with evaluate_point_guarded.
    """
    x_a = analytic.x_expectation(setting)
    y_a = analytic.y_expectation(setting)
    px_a = analytic.p_expectation(setting)
    coef = analytic.norm_coefficient(setting)
    report = oracle_report(setting, dim_x=dim_x)
    ps = setting.ps_paper if ps_convention == "paper" else report.ps_exact
    sel = setting.selection
    # oracle-side bookkeeping value of the same coefficient
    coef_oracle = sel.overlap / math.sqrt(report.ps_exact)
    return PointRecord(
        s=setting.s,
        theta=sel.theta,
        phi=sel.phi,
        mode=setting.mode.label(),
        op_class=setting.op_class,
        weak_value=setting.weak_value,
        x_mean=x_a,
        y_mean=y_a,
        px_mean=px_a,
        x_var=report.x_var,
        y_var=report.y_var,
        px_var=report.px_var,
        norm_coef=coef,
        ps_paper=setting.ps_paper,
        ps_exact=report.ps_exact,
        snr_x=snr_value(x_a, report.x_var, ps, n_measurements),
        snr_y=snr_value(y_a, report.y_var, ps, n_measurements),
        error="",
        x_resid=abs(x_a - report.x_mean),
        y_resid=abs(y_a - report.y_mean),
        px_resid=abs(px_a - report.px_mean),
        norm_resid=abs(coef - coef_oracle),
    )


def evaluate_point_guarded(
    setting: MeasurementSetting,
    n_measurements: int = 1,
    ps_convention: str = "paper",
) -> PointRecord:
    """evaluate_point that turns library errors into an error-column record."""
    try:
        return evaluate_point(setting, n_measurements, ps_convention)
    except VnmeasError as exc:
        sel = setting.selection
        nan = math.nan
        return PointRecord(
            s=setting.s,
            theta=sel.theta,
            phi=sel.phi,
            mode=setting.mode.label(),
            op_class=setting.op_class,
            weak_value=setting.weak_value,
            x_mean=nan,
            y_mean=nan,
            px_mean=nan,
            x_var=nan,
            y_var=nan,
            px_var=nan,
            norm_coef=nan,
            ps_paper=setting.ps_paper,
            ps_exact=nan,
            snr_x=nan,
            snr_y=nan,
            error=str(exc),
        )


def _guarded_task(args: tuple[MeasurementSetting, int, str]) -> PointRecord:
    return evaluate_point_guarded(*args)


def run_settings(
    settings: Iterable[MeasurementSetting],
    n_measurements: int = 1,
    ps_convention: str = "paper",
    jobs: int = 1,
) -> list[PointRecord]:
    """Evaluate many settings in their given order, optionally in parallel.

    Worker processes run identical code and map() preserves input order, so
    the result (and any file written from it) does not depend on jobs.
    """
    tasks = [(setting, n_measurements, ps_convention) for setting in settings]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_guarded_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [evaluate_point_guarded(*task) for task in tasks]


def format_value(value) -> str:
    """Serialize one CSV cell; floats via repr so round-tripping is exact,
    non-finite values as the literal tokens inf/-inf/nan."""
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_cell(value) -> str:
    # mode labels such as lg:0,1 embed commas, so quote per RFC 4180
    text = format_value(value)
    if "," in text or '"' in text or "\n" in text:
        return '"' + text.replace('"', '""') + '"'
    return text


def write_csv(records: Sequence[PointRecord], stream: IO[str], metadata: dict | None = None) -> None:
    """Write records in the fixed schema with '#' metadata lines on top."""
    for key, val in (metadata or {}).items():
        stream.write(f"# {key}: {val}\n")
    stream.write(",".join(CSV_COLUMNS) + "\n")
    for rec in records:
        stream.write(",".join(_csv_cell(v) for v in rec.csv_values()) + "\n")


def write_json(records: Sequence[PointRecord], stream: IO[str], metadata: dict | None = None) -> None:
    """JSON mirror of the CSV payload: metadata object plus row objects."""
    rows = [dict(zip(CSV_COLUMNS, rec.csv_values())) for rec in records]
    json.dump({"metadata": metadata or {}, "rows": rows}, stream, indent=2)
    stream.write("\n")


def emit(
    records: Sequence[PointRecord],
    fmt: str = "csv",
    path: str | None = None,
    metadata: dict | None = None,
) -> None:
    """Write records to a path or stdout in the requested format."""
    writer = write_csv if fmt == "csv" else write_json
    if path is None or path == "-":
        writer(records, sys.stdout, metadata)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            writer(records, fh, metadata)
