"""Closed-form moments against the truncated-space oracle and each other.

The closed forms and the oracle share no code: one evaluates Laguerre-series
expressions, the other displaces truncated states and reads moments off the
conditional state. Agreement between them is the correctness argument.
"""

import math

import numpy as np
import pytest

from vnmeas.analytic import (
    first_order_moments,
    norm_coefficient,
    p_expectation,
    reduced_fg_moments,
    snr_strong_limit,
    validity_margin,
    x_expectation,
    y_expectation,
)
from vnmeas.modes import PointerMode
from vnmeas.postselect import oracle_report
from vnmeas.settings import MeasurementSetting

MODES = (
    PointerMode.hg(0),
    PointerMode.hg(2),
    PointerMode.lg(0, 1),
    PointerMode.lg(1, 1),
)
WEAK_VALUES = (0.5 + 0j, 0.5 + 1j, 5 + 5j)
CLASSES = ("involutory", "projector")


def _setting(mode, op_class, wv, s, sigma=1.0):
    return MeasurementSetting.from_weak_value(
        mode=mode, op_class=op_class, weak_value=wv, s=s, sigma=sigma
    )


class TestNormCoefficient:
    @pytest.mark.parametrize("mode", [PointerMode.hg(2), PointerMode.lg(1, 1)])
    def test_unit_modulus_weak_value(self, mode):
        phase = 0.93
        wv = complex(math.cos(phase), math.sin(phase))
        setting = _setting(mode, "involutory", wv, s=1.7)
        assert norm_coefficient(setting) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("mode", MODES)
    @pytest.mark.parametrize("op_class", CLASSES)
    def test_uncoupled_is_unity(self, mode, op_class):
        setting = _setting(mode, op_class, 0.7 + 0.3j, s=0.0)
        assert norm_coefficient(setting) == pytest.approx(1.0, abs=1e-14)


class TestXExpectation:
    @pytest.mark.parametrize("s", [0.3, 2.0])
    def test_real_unit_weak_value_shifts_by_g(self, s):
        setting = _setting(PointerMode.hg(0), "involutory", 1.0 + 0j, s=s)
        assert x_expectation(setting) == pytest.approx(setting.g, rel=1e-12)

    def test_uncoupled_shift_vanishes(self):
        setting = _setting(PointerMode.lg(0, 1), "projector", 0.5 + 1j, s=0.0)
        assert x_expectation(setting) == 0.0

    def test_projector_strong_coupling_plateau(self):
        # g |<A>_w|^2 / N with N -> 0.5 once the overlap factor dies
        setting = _setting(PointerMode.hg(0), "projector", 0.5 + 0j, s=12.0)
        assert x_expectation(setting) == pytest.approx(0.5 * setting.g, rel=1e-6)


class TestYExpectation:
    @pytest.mark.parametrize("op_class", CLASSES)
    def test_rectangular_modes_never_shift(self, op_class):
        setting = _setting(PointerMode.hg(2, 1), op_class, 0.5 + 1j, s=1.3)
        assert y_expectation(setting) == 0.0

    def test_zero_winding_never_shifts(self):
        setting = _setting(PointerMode.lg(2, 0), "involutory", 0.5 + 1j, s=1.3)
        assert y_expectation(setting) == 0.0

    def test_weak_regime_matches_minus_l_g_im(self):
        setting = _setting(PointerMode.lg(0, 1), "involutory", 1j, s=1e-3)
        assert y_expectation(setting) == pytest.approx(-setting.g, rel=1e-3)

    def test_winding_reversal_flips_sign(self):
        up = _setting(PointerMode.lg(0, 1), "involutory", 0.5 + 1j, s=0.7)
        down = _setting(PointerMode.lg(0, -1), "involutory", 0.5 + 1j, s=0.7)
        assert y_expectation(down) == pytest.approx(-y_expectation(up), rel=1e-12)


class TestPExpectation:
    @pytest.mark.parametrize("mode", MODES)
    @pytest.mark.parametrize("op_class", CLASSES)
    def test_real_weak_value_gives_no_kick(self, mode, op_class):
        setting = _setting(mode, op_class, 0.8 + 0j, s=1.1)
        assert p_expectation(setting) == 0.0

    @pytest.mark.parametrize(
        "mode,factor",
        [(PointerMode.hg(1), 3.0), (PointerMode.lg(0, 2), 3.0)],
    )
    def test_weak_regime_order_factor(self, mode, factor):
        setting = _setting(mode, "involutory", 0.4j, s=1e-3)
        ratio = p_expectation(setting) / (setting.g * 0.4 / 2.0)
        assert ratio == pytest.approx(factor, rel=1e-3)

    @pytest.mark.parametrize(
        "mode", [PointerMode.hg(2), PointerMode.lg(1, 1), PointerMode.lg(0, 2)]
    )
    @pytest.mark.parametrize("s", [0.5, 2.0, 6.0])
    def test_budget_doubling_leaves_series_unchanged(self, mode, s):
        setting = _setting(mode, "involutory", 0.5 + 1j, s=s)
        base = p_expectation(setting)
        wide = p_expectation(setting, term_budget=800)
        assert wide == pytest.approx(base, rel=1e-12)


class TestOracleEquivalence:
    @pytest.mark.parametrize("op_class", CLASSES)
    @pytest.mark.parametrize("wv", WEAK_VALUES)
    @pytest.mark.parametrize("s", [0.5, 2.0])
    def test_moments_agree(self, op_class, wv, s):
        for mode in MODES:
            setting = _setting(mode, op_class, wv, s=s)
            rep = oracle_report(setting)
            tol = 1e-8 * max(1.0, setting.g)
            assert abs(x_expectation(setting) - rep.x_mean) <= tol
            assert abs(y_expectation(setting) - rep.y_mean) <= tol
            assert abs(p_expectation(setting) - rep.px_mean) <= tol
            bookkeeping = setting.selection.overlap / math.sqrt(rep.ps_exact)
            assert abs(norm_coefficient(setting) - bookkeeping) <= tol

    def test_moments_agree_off_unit_width(self):
        setting = _setting(PointerMode.lg(0, 1), "involutory", 0.5 + 1j, s=1.5, sigma=2.3)
        rep = oracle_report(setting)
        tol = 1e-8 * max(1.0, setting.g)
        assert abs(x_expectation(setting) - rep.x_mean) <= tol
        assert abs(y_expectation(setting) - rep.y_mean) <= tol
        assert abs(p_expectation(setting) - rep.px_mean) <= tol


class TestFundamentalReduction:
    @pytest.mark.parametrize("op_class", CLASSES)
    @pytest.mark.parametrize("wv", WEAK_VALUES)
    @pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 2.0, 4.0, 6.0])
    def test_general_formulas_collapse(self, op_class, wv, s):
        x_red, px_red = reduced_fg_moments(s, 1.0, op_class, wv)
        for mode in (PointerMode.hg(0), PointerMode.lg(0, 0)):
            setting = _setting(mode, op_class, wv, s=s)
            assert x_expectation(setting) == pytest.approx(x_red, abs=1e-12)
            assert p_expectation(setting) == pytest.approx(px_red, abs=1e-12)

    def test_real_unit_weak_value(self):
        x, px = reduced_fg_moments(1.3, 1.0, "involutory", 1.0 + 0j)
        assert x == pytest.approx(1.3, rel=1e-12)
        assert px == 0.0

    def test_strong_coupling_involutory_plateau(self):
        # Z -> 1 - 0.375 = 0.625 once the overlap factor dies, so x -> 0.8 g
        x, _ = reduced_fg_moments(12.0, 1.0, "involutory", 0.5 + 0j)
        assert x == pytest.approx(0.8 * 12.0, rel=1e-6)

    def test_uncoupled(self):
        x, px = reduced_fg_moments(0.0, 1.0, "projector", 0.5 + 1j)
        assert x == 0.0
        assert px == 0.0

    def test_fundamental_lg_equals_fundamental_hg(self):
        for op_class in CLASSES:
            for s in (0.4, 2.2):
                hg = _setting(PointerMode.hg(0), op_class, 0.5 + 1j, s=s)
                lg = _setting(PointerMode.lg(0, 0), op_class, 0.5 + 1j, s=s)
                for fn in (x_expectation, y_expectation, p_expectation, norm_coefficient):
                    assert fn(lg) == pytest.approx(fn(hg), abs=1e-12)


class TestDependenceStructure:
    @pytest.mark.parametrize("op_class", CLASSES)
    @pytest.mark.parametrize("mode", MODES)
    def test_x_blind_to_conjugation(self, mode, op_class):
        # pairs sharing Re and modulus: the lateral shift cannot tell them apart
        plus = _setting(mode, op_class, 0.3 + 0.4j, s=1.2)
        minus = _setting(mode, op_class, 0.3 - 0.4j, s=1.2)
        assert x_expectation(plus) == pytest.approx(x_expectation(minus), abs=1e-10)
        assert norm_coefficient(plus) == pytest.approx(norm_coefficient(minus), abs=1e-10)

    @pytest.mark.parametrize("op_class", CLASSES)
    def test_momentum_kick_odd_in_imaginary_part(self, op_class):
        plus = _setting(PointerMode.hg(1), op_class, 0.3 + 0.4j, s=1.2)
        minus = _setting(PointerMode.hg(1), op_class, 0.3 - 0.4j, s=1.2)
        assert p_expectation(minus) == pytest.approx(-p_expectation(plus), abs=1e-10)

    def test_lateral_shift_linear_in_imaginary_part(self):
        # fixed |<A>_w| = 1 so the normalization factor is frozen; the ratio
        # y / Im<A>_w must then be a constant of the phase
        mode = PointerMode.lg(0, 1)
        ratios = []
        for phase in (math.pi / 6, math.pi / 3, math.pi / 2):
            wv = complex(math.cos(phase), math.sin(phase))
            setting = _setting(mode, "involutory", wv, s=0.9)
            ratios.append(y_expectation(setting) / wv.imag)
        assert ratios[0] == pytest.approx(ratios[1], abs=1e-10)
        assert ratios[0] == pytest.approx(ratios[2], abs=1e-10)

    @pytest.mark.parametrize("l", [1, 2])
    def test_longitudinal_results_blind_to_winding_sign(self, l):
        up = _setting(PointerMode.lg(1, l), "involutory", 0.5 + 1j, s=1.4)
        down = _setting(PointerMode.lg(1, -l), "involutory", 0.5 + 1j, s=1.4)
        assert x_expectation(up) == pytest.approx(x_expectation(down), abs=1e-12)
        assert p_expectation(up) == pytest.approx(p_expectation(down), abs=1e-12)
        assert norm_coefficient(up) == pytest.approx(norm_coefficient(down), abs=1e-12)


class TestFirstOrderMoments:
    def test_rectangular_imaginary_weak_value(self):
        x, y, px = first_order_moments(PointerMode.hg(2), "involutory", 1j, g=0.2, sigma=1.0)
        assert (x, y) == (0.0, 0.0)
        assert px == pytest.approx(5 * 0.2 / 2.0, rel=1e-12)

    def test_vortex_real_weak_value(self):
        x, y, px = first_order_moments(PointerMode.lg(1, 1), "involutory", 1.0 + 0j, g=0.2, sigma=1.0)
        assert x == pytest.approx(0.2, rel=1e-12)
        assert y == 0.0
        assert px == 0.0

    def test_vortex_complex_weak_value(self):
        x, y, px = first_order_moments(
            PointerMode.lg(0, 1), "involutory", 0.5 + 1j, g=0.3, sigma=1.0
        )
        assert x == pytest.approx(0.15, rel=1e-12)
        assert y == pytest.approx(-0.3, rel=1e-12)
        assert px == pytest.approx(2 * 0.3 / 2.0, rel=1e-12)

    @pytest.mark.parametrize("op_class", CLASSES)
    @pytest.mark.parametrize(
        "mode",
        [PointerMode.hg(n) for n in range(3)]
        + [PointerMode.lg(p, l) for p in range(3) for l in range(-2, 3)],
    )
    def test_full_formulas_converge_here(self, mode, op_class):
        s = 1e-3
        for wv in (0.5 + 0.5j, 0.9j, -0.7 + 0.1j):
            setting = _setting(mode, op_class, wv, s=s)
            x, y, px = first_order_moments(mode, op_class, wv, g=setting.g, sigma=1.0)
            # zero targets (e.g. Re<A>_w = 0) leave an O(g^2) residue in the
            # full formulas; 1e-3 * g is the matching absolute floor
            floor = 1e-3 * setting.g
            assert x_expectation(setting) == pytest.approx(x, rel=1e-3, abs=floor)
            assert y_expectation(setting) == pytest.approx(y, rel=1e-3, abs=floor)
            assert p_expectation(setting) == pytest.approx(px, rel=1e-3, abs=floor)


class TestValidityMargin:
    def test_uncoupled_margin_vanishes(self):
        assert validity_margin(PointerMode.hg(0), "involutory", 0.5 + 1j, g=0.0, sigma=1.0) == 0.0

    def test_large_weak_value_scales_margin(self):
        got = validity_margin(PointerMode.hg(0), "involutory", 5.0 + 0j, g=0.1, sigma=1.0)
        assert got == pytest.approx(0.25, rel=1e-12)

    def test_projector_keeps_unit_floor(self):
        got = validity_margin(PointerMode.hg(0), "projector", 0.25 + 0j, g=0.2, sigma=1.0)
        assert got == pytest.approx(0.1, rel=1e-12)


class TestStrongLimit:
    def test_involutory_reference_value(self):
        assert snr_strong_limit("involutory", 0.5 + 0j, 0.8) == pytest.approx(
            1.19256958799989, abs=1e-12
        )

    def test_projector_reference_value(self):
        assert snr_strong_limit("projector", 0.5 + 0j, 0.8) == pytest.approx(
            0.894427190999916, abs=1e-12
        )

    def test_imaginary_weak_value_kills_involutory_limit(self):
        assert snr_strong_limit("involutory", 2j, 0.5) == 0.0

    def test_pole_reports_divergence(self):
        assert snr_strong_limit("involutory", 1.0 + 0j, 0.5) == math.inf
