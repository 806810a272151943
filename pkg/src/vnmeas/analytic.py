"""Closed-form conditional pointer moments at arbitrary coupling.

Every quantity here is an explicit function of the weak value, the coupling
strength and the mode indices; nothing in this module builds an operator or
touches the truncated simulation.  That independence is the point: the
oracle route in `postselect` must agree with these expressions without
sharing a code path with them.

All shapes are evaluated at unit beam width and rescaled at the boundary:
position-like means carry sigma, momentum-like means carry 1/sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DegenerateNormalizationError, SeriesBudgetError
from .modes import PointerMode, index_map, lg_coefficients
from .settings import MeasurementSetting
from .specfn import laguerre, laguerre_assoc

__all__ = [
    "PointerMomentReport",
    "norm_coefficient",
    "x_expectation",
    "y_expectation",
    "p_expectation",
    "reduced_fg_moments",
    "first_order_moments",
    "validity_margin",
    "snr_strong_limit",
]

# Normalization radicands at or below this are treated as a vanishing
# post-selected ensemble.
_RADICAND_FLOOR = 1e-12

_DEFAULT_TERM_BUDGET = 400


@dataclass(frozen=True)
class PointerMomentReport:
    """First and second conditional pointer moments plus bookkeeping.

    Means and variances are in physical units (positions scale with sigma,
    momenta with 1/sigma).  norm_coef and the two probabilities are optional
    because the oracle fills the moments first and the caller completes the
    record.
    """

    x_mean: float
    y_mean: float
    px_mean: float
    py_mean: float
    x_var: float
    y_var: float
    px_var: float
    norm_coef: Optional[float] = None
    ps_paper: Optional[float] = None
    ps_exact: Optional[float] = None

    def completed(self, **fields) -> "PointerMomentReport":
        return replace(self, **fields)


def _px_series(n: int, x: float, budget: int) -> float:
    """Momentum-shift kernel for a level-n longitudinal mode.

    sum over kappa >= 0 of (n!/kappa!) (-x)^(kappa-n)
    L_n^(kappa-n)(x) L_n^(kappa-n+1)(x).

    Terms die factorially; stop after five consecutive terms below 1e-16 of
    the running sum (an exact zero counts, factorial underflow produces them
    long before the budget).  x > 0 is required; the x -> 0 limit (2n + 1)
    is taken upstream by the zero-coupling short circuit.
    """
    total = 0.0
    small = 0
    for kappa in range(n + budget + 1):
        eta = kappa - n
        pref = math.exp(math.lgamma(n + 1) - math.lgamma(kappa + 1))
        term = pref * (-x) ** eta * laguerre_assoc(n, eta, x) * laguerre_assoc(n, eta + 1, x)
        total += term
        if term == 0.0 or abs(term) < 1e-16 * abs(total):
            small += 1
            if small >= 5:
                return total
        else:
            small = 0
    raise SeriesBudgetError(
        f"momentum kernel did not converge within {n + budget + 1} terms (n={n}, x={x})"
    )


@lru_cache(maxsize=128)
def _lg_cells(alpha: int, beta: int) -> tuple[np.ndarray, np.ndarray]:
    """(complex cell amplitudes A_m, real weights w_m = |A_m|^2)."""
    amps = lg_coefficients(alpha, beta).cell_amplitudes()
    amps.flags.writeable = False
    w = np.abs(amps) ** 2
    w.flags.writeable = False
    return amps, w


def _lg_diag_sum(alpha: int, beta: int, t: float) -> float:
    """Weighted diagonal displacement overlap: sum_m w_m L_{total-m}(t)."""
    _, w = _lg_cells(alpha, beta)
    total = alpha + beta
    return float(sum(wm * laguerre(total - m, t) for m, wm in enumerate(w) if wm != 0.0))


def _lg_y_sum(alpha: int, beta: int, t: float) -> float:
    """Lateral coherence kernel: the delta-constrained double sum over
    neighboring cells, factored through the cell amplitudes."""
    amps, _ = _lg_cells(alpha, beta)
    total = alpha + beta
    out = 0.0
    for m in range(1, total + 1):
        c = (1j * amps[m] * amps[m - 1].conjugate()).real
        if c != 0.0:
            nx = total - m
            out += c * math.sqrt(m / (nx + 1.0)) * laguerre_assoc(nx, 1, t)
    for m in range(total):
        c = (1j * amps[m] * amps[m + 1].conjugate()).real
        if c != 0.0:
            nx = total - m
            out -= c * math.sqrt((m + 1.0) / nx) * laguerre_assoc(nx - 1, 1, t)
    # plain float out; numpy scalars must not leak into serialized fields
    return float(out)


def _lag1_pair(n: int, t: float) -> float:
    """L_n^(1)(t) + L_{n-1}^(1)(t) with the degree-(-1) term dropped."""
    out = laguerre_assoc(n, 1, t)
    if n >= 1:
        out += laguerre_assoc(n - 1, 1, t)
    return out


@dataclass(frozen=True)
class _Shapes:
    """Unit-width conditional moments and the normalization radicand."""

    radicand: float
    x: float
    y: float
    px: float


def _shapes(setting: MeasurementSetting, term_budget: int = _DEFAULT_TERM_BUDGET) -> _Shapes:
    aw = setting.weak_value
    s = setting.s
    if s == 0.0:
        # zero coupling leaves the pointer untouched for every mode; skip the
        # series so the identity is exact, not 1 +/- weight-sum rounding
        return _Shapes(radicand=1.0, x=0.0, y=0.0, px=0.0)
    re, im, a2 = aw.real, aw.imag, abs(aw) ** 2
    mode = setting.mode
    involutory = setting.op_class == "involutory"

    if mode.family == "hg":
        n = mode.n
        if involutory:
            diag = math.exp(-0.5 * s * s) * laguerre(n, s * s)
            radicand = 1.0 + 0.5 * (1.0 - a2) * (diag - 1.0)
            coef2 = _guarded_inverse(radicand)
            x = coef2 * s * re
            px = 0.0
            if s > 0.0 and im != 0.0:
                arg = 0.25 * s * s
                px = coef2 * s * im * math.exp(-arg) * _px_series(n, arg, term_budget) / 2.0
        else:
            arg = 0.25 * s * s
            diag = math.exp(-0.5 * arg) * laguerre(n, arg)
            radicand = 1.0 + 2.0 * (re - a2) * (diag - 1.0)
            coef2 = _guarded_inverse(radicand)
            x = coef2 * s * ((re - a2) * diag + a2)
            px = 0.0
            if s > 0.0 and im != 0.0:
                px = coef2 * s * im * math.exp(-0.5 * arg) * _lag1_pair(n, arg) / 2.0
        return _Shapes(radicand=radicand, x=x, y=0.0, px=px)

    alpha, beta, total, l = index_map(mode.p, mode.l)
    amps, w = _lg_cells(alpha, beta)
    if involutory:
        diag = math.exp(-0.5 * s * s) * _lg_diag_sum(alpha, beta, s * s)
        radicand = 1.0 + 0.5 * (1.0 - a2) * (diag - 1.0)
        coef2 = _guarded_inverse(radicand)
        x = coef2 * s * re
        y = 0.0
        if l != 0 and s > 0.0 and im != 0.0:
            y = coef2 * s * im * math.exp(-0.5 * s * s) * _lg_y_sum(alpha, beta, s * s)
        px = 0.0
        if s > 0.0 and im != 0.0:
            arg = 0.25 * s * s
            ser = float(
                sum(
                    wm * _px_series(total - m, arg, term_budget)
                    for m, wm in enumerate(w)
                    if wm != 0.0
                )
            )
            px = coef2 * s * im * math.exp(-arg) * ser / 2.0
    else:
        arg = 0.25 * s * s
        diag = math.exp(-0.5 * arg) * _lg_diag_sum(alpha, beta, arg)
        radicand = 1.0 + 2.0 * (re - a2) * (diag - 1.0)
        coef2 = _guarded_inverse(radicand)
        x = coef2 * s * ((re - a2) * diag + a2)
        y = 0.0
        if l != 0 and s > 0.0 and im != 0.0:
            y = coef2 * s * im * math.exp(-0.5 * arg) * _lg_y_sum(alpha, beta, arg)
        px = 0.0
        if s > 0.0 and im != 0.0:
            ser = float(
                sum(wm * _lag1_pair(total - m, arg) for m, wm in enumerate(w) if wm != 0.0)
            )
            px = coef2 * s * im * math.exp(-0.5 * arg) * ser / 2.0
    return _Shapes(radicand=radicand, x=x, y=y, px=px)


def _guarded_inverse(radicand: float) -> float:
    if radicand < _RADICAND_FLOOR:
        raise DegenerateNormalizationError(
            f"conditional-state normalization radicand {radicand} at or below zero"
        )
    return 1.0 / radicand


def norm_coefficient(setting: MeasurementSetting) -> float:
    """Normalization coefficient of the conditional pointer state (the ratio
    of the bare overlap to the square root of the exact detection
    probability).  Always positive; 1 at zero coupling."""
    return _shapes(setting).radicand ** -0.5


def x_expectation(setting: MeasurementSetting) -> float:
    """Conditional mean of the meter (coupled) position, physical units."""
    return _shapes(setting).x * setting.sigma


def y_expectation(setting: MeasurementSetting) -> float:
    """Conditional mean of the lateral position.

    Exactly zero for rectangular modes and for zero winding; the lateral
    shift is carried by coherence between neighboring ladder cells, which
    only vortex modes have.
    """
    return _shapes(setting).y * setting.sigma


def p_expectation(setting: MeasurementSetting, term_budget: int = _DEFAULT_TERM_BUDGET) -> float:
    """Conditional mean of the meter momentum, physical units.

    term_budget bounds the series kernel; the default converges for any
    coupling in the supported range and doubling it changes nothing beyond
    rounding noise.
    """
    return _shapes(setting, term_budget=term_budget).px / setting.sigma


def reduced_fg_moments(
    s: float, sigma: float, op_class: str, weak_value: complex
) -> tuple[float, float]:
    """Fundamental-mode closed forms (position and momentum means).

    These are the classic exponential-decay expressions; they must equal the
    general level-0 formulas identically and the tests hold them to 1e-12.
    """
    aw = complex(weak_value)
    re, im, a2 = aw.real, aw.imag, abs(aw) ** 2
    g = s * sigma
    if op_class == "involutory":
        decay = math.exp(-0.5 * s * s)
        denom = 1.0 + 0.5 * (1.0 - a2) * (decay - 1.0)
        x = g * re / denom
        px = g * im * decay / (2.0 * sigma * sigma * denom)
    else:
        decay = math.exp(-s * s / 8.0)
        denom = 1.0 + 2.0 * (re - a2) * (decay - 1.0)
        x = g * (a2 + (re - a2) * decay) / denom
        px = g * im * decay / (2.0 * sigma * sigma * denom)
    return x, px


def _order_factor(mode: PointerMode) -> int:
    """2n+1 for rectangular modes, 2p+|l|+1 for vortex modes."""
    if mode.family == "hg":
        return 2 * mode.n + 1
    return 2 * mode.p + abs(mode.l) + 1


def first_order_moments(
    mode: PointerMode, op_class: str, weak_value: complex, g: float, sigma: float = 1.0
) -> tuple[float, float, float]:
    """Leading-order (weak-coupling) moments (x, y, px).

    Both operator classes reduce to the same leading-order forms; op_class
    is accepted for signature symmetry.  The lateral shift is -l g Im<A>_w
    and flips sign with the winding.
    """
    aw = complex(weak_value)
    x = g * aw.real
    y = -mode.l * g * aw.imag if mode.family == "lg" else 0.0
    px = g * aw.imag * _order_factor(mode) / (2.0 * sigma * sigma)
    return x, y, px


def validity_margin(
    mode: PointerMode, op_class: str, weak_value: complex, g: float, sigma: float = 1.0
) -> float:
    """Size of the expansion parameter the first-order forms assume small.

    Scales with g sqrt(order)/(2 sigma) times the largest of 1, |<A>_w| and,
    for the projector class, sqrt(|Re <A>_w|).
    """
    aw = complex(weak_value)
    worst = max(1.0, abs(aw))
    if op_class == "projector":
        worst = max(worst, math.sqrt(abs(aw.real)))
    return 0.5 * (g / sigma) * math.sqrt(_order_factor(mode)) * worst


def snr_strong_limit(op_class: str, weak_value: complex, ps: float) -> float:
    """Coupling-independent plateau of the position signal-to-noise ratio.

    Returns math.inf when the variance radicand vanishes (real unit-modulus
    weak value for the involutory class, weak value 1 for the projector).
    """
    aw = complex(weak_value)
    re, a2 = aw.real, abs(aw) ** 2
    if op_class == "involutory":
        radicand = 1.0 + 2.0 * a2 + a2 * a2 - 4.0 * re * re
        numer = 2.0 * math.sqrt(ps) * abs(re)
    else:
        radicand = 1.0 + a2 - 2.0 * re
        numer = math.sqrt(ps) * abs(aw)
    if radicand < 1e-14:
        return math.inf
    return numer / math.sqrt(radicand)
