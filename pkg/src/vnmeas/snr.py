"""Post-selected signal-to-noise ratios.

SNR = sqrt(N * P_s) |mean| / std, with the mean taken from the closed-form
route and the standard deviation from the truncated oracle.  Mixing the two
routes is deliberate: it makes every SNR number a cross-check of both.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import analytic
from .errors import ConfigError, DegeneratePointerError, VnmeasError
from .postselect import oracle_report
from .settings import MeasurementSetting, SweepGrid

__all__ = [
    "SnrRequest",
    "SurfaceRow",
    "snr",
    "snr_value",
    "snr_surface",
]

_DIRECTIONS = ("x", "y")
_CONVENTIONS = ("paper", "exact")


@dataclass(frozen=True)
class SnrRequest:
    """One SNR evaluation: a setting, a pointer direction, a repetition
    count and the probability reporting convention."""

    setting: MeasurementSetting
    direction: str = "x"
    n_measurements: int = 1
    ps_convention: str = "paper"

    def __post_init__(self) -> None:
        if self.direction not in _DIRECTIONS:
            raise ConfigError(f"direction must be one of {_DIRECTIONS}, got {self.direction!r}")
        if self.n_measurements < 1:
            raise ConfigError(f"n_measurements must be >= 1, got {self.n_measurements}")
        if self.ps_convention not in _CONVENTIONS:
            raise ConfigError(
                f"ps_convention must be one of {_CONVENTIONS}, got {self.ps_convention!r}"
            )


def snr_value(mean: float, variance: float, ps: float, n_measurements: int) -> float:
    """Assemble an SNR from its parts; exact-zero mean short-circuits to 0."""
    if mean == 0.0:
        return 0.0
    if variance <= 0.0:
        raise DegeneratePointerError(
            f"zero pointer variance with nonzero mean {mean}; SNR undefined"
        )
    return math.sqrt(n_measurements * ps) * abs(mean) / math.sqrt(variance)


def snr(req: SnrRequest) -> float:
    """Signal-to-noise ratio for one measurement setting and direction.

    A structurally zero mean (lateral direction on rectangular modes or zero
    winding, zero coupling) returns 0 without running the oracle.
    """
    setting = req.setting
    mean = (
        analytic.x_expectation(setting)
        if req.direction == "x"
        else analytic.y_expectation(setting)
    )
    if mean == 0.0:
        return 0.0
    report = oracle_report(setting)
    variance = report.x_var if req.direction == "x" else report.y_var
    ps = setting.ps_paper if req.ps_convention == "paper" else report.ps_exact
    return snr_value(mean, variance, ps, req.n_measurements)


@dataclass(frozen=True)
class SurfaceRow:
    """One grid point of an SNR surface; error carries the message of any
    per-point failure instead of aborting the whole surface."""

    s: float
    theta: float
    phi: float
    mode: str
    snr: float
    error: str = ""


def _surface_point(args: tuple[MeasurementSetting, str, int, str]) -> SurfaceRow:
    setting, direction, n_measurements, ps_convention = args
    sel = setting.selection
    try:
        value = snr(SnrRequest(setting, direction, n_measurements, ps_convention))
        return SurfaceRow(setting.s, sel.theta, sel.phi, setting.mode.label(), value)
    except VnmeasError as exc:
        return SurfaceRow(
            setting.s, sel.theta, sel.phi, setting.mode.label(), math.nan, str(exc)
        )


def snr_surface(
    grid: SweepGrid,
    direction: str = "x",
    n_measurements: int = 1,
    ps_convention: str = "paper",
    jobs: int = 1,
) -> list[SurfaceRow]:
    """Evaluate the SNR over a whole grid, coupling-major row order.

    Per-point failures land in the row's error field; the surface itself
    always completes.  jobs > 1 fans points out to worker processes; row
    order (and therefore any serialized output) is identical either way.
    """
    tasks = [(setting, direction, n_measurements, ps_convention) for setting in grid.points()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_surface_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [_surface_point(t) for t in tasks]
