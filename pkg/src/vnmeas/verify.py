"""Self-verification: the dual-route agreement checks behind `vnmeas verify`.

The full pass sweeps the reference grid (all mode families, both operator
classes, five weak values, five couplings) and checks that the closed-form
route and the truncated-oracle route agree point by point, that the branch
decomposition matches the matrix exponential, that the level-0 formulas
collapse to the fundamental-mode forms, and that the position SNR reaches
its strong-coupling plateau.  The quick pass runs a subset sized for CI.

Canary mode flips a sign in a local copy of the position comparison and
expects the run to fail; it exists to prove the harness can actually detect
a broken formula.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from . import analytic
from .errors import VnmeasError
from .modes import PointerMode
from .postselect import (
    QubitState,
    SystemOperator,
    build_mode_state,
    decomposition_residual,
    oracle_report,
)
from .fock import adaptive_dim_x
from .settings import MeasurementSetting
from .snr import SnrRequest, snr
from .sweeps import run_settings

__all__ = [
    "CheckResult",
    "reference_modes",
    "reference_weak_values",
    "reference_couplings",
    "acceptance_grid",
    "run_verification",
]

_DEFAULT_TOLERANCE = 1e-8


def reference_modes() -> tuple[PointerMode, ...]:
    return (
        PointerMode.hg(0),
        PointerMode.hg(1),
        PointerMode.hg(2),
        PointerMode.hg(3),
        PointerMode.lg(0, 0),
        PointerMode.lg(0, 1),
        PointerMode.lg(0, 2),
        PointerMode.lg(1, 1),
        PointerMode.lg(2, 2),
    )


def reference_weak_values() -> tuple[complex, ...]:
    return (0.5 + 0j, 0.5 + 1j, 1j, 5 + 0j, 5 + 5j)


def reference_couplings() -> tuple[float, ...]:
    return (0.1, 0.5, 1.0, 2.0, 4.0)


def acceptance_grid() -> list[MeasurementSetting]:
    """The reference grid: every mode, class, weak value and coupling."""
    return [
        MeasurementSetting.from_weak_value(mode, op_class, wv, s)
        for mode in reference_modes()
        for op_class in ("involutory", "projector")
        for wv in reference_weak_values()
        for s in reference_couplings()
    ]


def _quick_grid() -> list[MeasurementSetting]:
    modes = (PointerMode.hg(0), PointerMode.hg(2), PointerMode.lg(0, 1), PointerMode.lg(1, 1))
    return [
        MeasurementSetting.from_weak_value(mode, op_class, wv, s)
        for mode in modes
        for op_class in ("involutory", "projector")
        for wv in (0.5 + 0j, 0.5 + 1j, 5 + 5j)
        for s in (0.5, 2.0, 4.0)
    ]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    worst: float  # worst residual as a multiple of its tolerance
    tolerance: float
    points: int
    detail: str = ""


def _residual_check(
    settings: list[MeasurementSetting], tolerance: float, jobs: int
) -> CheckResult:
    records = run_settings(settings, jobs=jobs)
    worst = 0.0
    detail = ""
    ok = True
    for rec in records:
        if rec.error:
            return CheckResult(
                "moment-residuals", False, math.inf, tolerance, len(records),
                f"{rec.mode} {rec.op_class} s={rec.s}: {rec.error}",
            )
        g = rec.s  # sigma is 1 on the reference grids
        scale = tolerance * max(1.0, g)
        for label, resid in (
            ("x", rec.x_resid),
            ("y", rec.y_resid),
            ("px", rec.px_resid),
            ("norm", rec.norm_resid),
        ):
            ratio = resid / scale
            if ratio > worst:
                worst = ratio
                detail = f"worst: {label} at {rec.mode} {rec.op_class} s={rec.s} wv={rec.weak_value}"
    ok = worst <= 1.0
    return CheckResult("moment-residuals", ok, worst, tolerance, len(records), detail)


def _canary_check(settings: list[MeasurementSetting], tolerance: float) -> CheckResult:
    """Identical to the position part of the residual check except that the
    local comparison copy carries a deliberate sign flip, so a working
    harness must report failure here."""
    worst = 0.0
    for setting in settings:
        flipped = -analytic.x_expectation(setting)
        report = oracle_report(setting)
        scale = tolerance * max(1.0, setting.g)
        worst = max(worst, abs(flipped - report.x_mean) / scale)
    return CheckResult(
        "canary-sign-flip",
        worst <= 1.0,
        worst,
        tolerance,
        len(settings),
        "expected to fail; a pass here means the harness is blind",
    )


def _decomposition_check(quick: bool, tolerance: float) -> CheckResult:
    modes = (
        (PointerMode.hg(1), PointerMode.lg(0, 1))
        if quick
        else (PointerMode.hg(0), PointerMode.hg(2), PointerMode.lg(0, 1), PointerMode.lg(1, 1))
    )
    couplings = (1.0, 3.0) if quick else (0.5, 2.0, 4.0)
    worst = 0.0
    detail = ""
    count = 0
    for mode in modes:
        dims = (adaptive_dim_x(mode.n_max_x, max(couplings)), mode.dim_y_needed)
        pointer = build_mode_state(mode, dims)
        psi_i = QubitState.from_selection(
            MeasurementSetting.from_weak_value(mode, "involutory", 0.5 + 1j, 1.0).selection
        )
        for op_class in ("involutory", "projector"):
            op = SystemOperator.for_class(op_class)
            for s in couplings:
                resid = decomposition_residual(op, s, pointer, psi_i) / tolerance
                count += 1
                if resid > worst:
                    worst = resid
                    detail = f"worst: {mode.label()} {op_class} s={s}"
    return CheckResult("decomposition-identity", worst <= 1.0, worst, tolerance, count, detail)


def _reduction_check() -> CheckResult:
    tolerance = 1e-12
    worst = 0.0
    count = 0
    detail = ""
    for mode in (PointerMode.hg(0), PointerMode.lg(0, 0)):
        for op_class in ("involutory", "projector"):
            for wv in (0.5 + 0j, 0.5 + 1j, 5 + 5j):
                for s in (0.0, 0.3, 1.0, 2.5, 6.0):
                    setting = MeasurementSetting.from_weak_value(mode, op_class, wv, s)
                    x_red, px_red = analytic.reduced_fg_moments(s, 1.0, op_class, wv)
                    dx = abs(analytic.x_expectation(setting) - x_red) / max(1.0, abs(x_red))
                    dp = abs(analytic.p_expectation(setting) - px_red) / max(1.0, abs(px_red))
                    gap = max(dx, dp) / tolerance
                    count += 1
                    if gap > worst:
                        worst = gap
                        detail = f"worst: {mode.label()} {op_class} s={s} wv={wv}"
    return CheckResult("fundamental-mode-reduction", worst <= 1.0, worst, tolerance, count, detail)


def _strong_limit_check() -> CheckResult:
    tolerance = 0.01  # relative
    worst = 0.0
    count = 0
    detail = ""
    for op_class in ("involutory", "projector"):
        for wv in (0.5 + 0j, 0.5 + 1j):
            setting = MeasurementSetting.from_weak_value(PointerMode.hg(0), op_class, wv, 10.0)
            limit = analytic.snr_strong_limit(op_class, wv, setting.ps_paper)
            value = snr(SnrRequest(setting, "x"))
            gap = abs(value - limit) / limit / tolerance
            count += 1
            if gap > worst:
                worst = gap
                detail = (
                    f"worst: {op_class} wv={wv}; the conditional variance keeps the "
                    f"sigma^2 pointer term the limit drops, so the ratio approaches "
                    f"(1 + 1/(s^2 v))^(-1/2) from below and can sit just outside 1% at s=10"
                )
    return CheckResult("strong-coupling-plateau", worst <= 1.0, worst, tolerance, count, detail)


def _first_order_check() -> CheckResult:
    tolerance = 1e-3  # relative, at s = 1e-3 the neglected terms are O(s^2)
    worst = 0.0
    count = 0
    detail = ""
    cases = (
        (PointerMode.hg(2), "involutory", 1j),
        (PointerMode.lg(0, 1), "involutory", 0.5 + 1j),
        (PointerMode.lg(0, 2), "projector", 0.5 + 1j),
    )
    s = 1e-3
    for mode, op_class, wv in cases:
        setting = MeasurementSetting.from_weak_value(mode, op_class, wv, s)
        approx = analytic.first_order_moments(mode, op_class, wv, setting.g, setting.sigma)
        exact = (
            analytic.x_expectation(setting),
            analytic.y_expectation(setting),
            analytic.p_expectation(setting),
        )
        for a, e in zip(approx, exact):
            if a == 0.0 and e == 0.0:
                continue
            gap = abs(a - e) / max(abs(a), abs(e)) / tolerance
            count += 1
            if gap > worst:
                worst = gap
                detail = f"worst: {mode.label()} {op_class}"
    return CheckResult("first-order-forms", worst <= 1.0, worst, tolerance, count, detail)


def run_verification(
    quick: bool = False,
    canary: bool = False,
    jobs: int = 1,
    tolerance: float = _DEFAULT_TOLERANCE,
) -> dict:
    """Run the verification suite and return a JSON-ready report.

    The report's top-level `ok` drives the CLI exit code.  Canary mode runs
    only the sign-flipped check, which must fail.
    """
    grid = _quick_grid() if (quick or canary) else acceptance_grid()
    checks: list[CheckResult] = []
    if canary:
        checks.append(_canary_check(grid[:8], tolerance))
    else:
        try:
            checks.append(_residual_check(grid, tolerance, jobs))
            checks.append(_decomposition_check(quick, tolerance))
            checks.append(_reduction_check())
            if not quick:
                checks.append(_strong_limit_check())
                checks.append(_first_order_check())
        except VnmeasError as exc:  # a check that cannot even run is a failure
            checks.append(CheckResult("aborted", False, math.inf, tolerance, 0, str(exc)))
    return {
        "ok": all(c.ok for c in checks),
        "quick": quick,
        "canary": canary,
        "tolerance": tolerance,
        "checks": [asdict(c) for c in checks],
    }
