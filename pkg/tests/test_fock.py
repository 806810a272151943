"""Truncated-basis states, quadratures, and operator application."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vnmeas.errors import DimensionError
from vnmeas.fock import (
    OperatorMatrix,
    TruncatedState,
    adaptive_dim_x,
    apply,
    build_displacement,
    build_quadratures,
    expectation,
    tail_mass,
)
from vnmeas.modes import hg_state


def _single_mode(vec):
    return TruncatedState(np.asarray(vec, dtype=complex).reshape(1, -1, 1))


class TestTruncatedState:
    def test_axis_count_enforced(self):
        with pytest.raises(DimensionError):
            TruncatedState(np.zeros((4, 4), dtype=complex))

    def test_qubit_axis_length_enforced(self):
        with pytest.raises(DimensionError):
            TruncatedState(np.zeros((3, 4, 1), dtype=complex))

    def test_norm_and_normalized(self):
        st_ = _single_mode([3.0, 4.0])
        assert st_.norm() == pytest.approx(5.0)
        assert st_.normalized().norm() == pytest.approx(1.0, abs=1e-15)

    def test_normalizing_zero_state_fails(self):
        with pytest.raises(DimensionError):
            _single_mode([0.0, 0.0]).normalized()

    def test_overlap_conjugates_left_argument(self):
        a = _single_mode([1j, 0.0])
        b = _single_mode([1.0, 0.0])
        assert a.overlap(b) == pytest.approx(-1j)

    def test_overlap_shape_mismatch(self):
        with pytest.raises(DimensionError):
            _single_mode([1.0]).overlap(_single_mode([1.0, 0.0]))


class TestQuadratures:
    def test_position_ladder_entry(self):
        pos, _ = build_quadratures(6, sigma=1.0)
        assert pos.entries[0, 1] == pytest.approx(1.0)

    def test_momentum_ladder_entry(self):
        _, mom = build_quadratures(6, sigma=1.0)
        assert mom.entries[1, 0] == pytest.approx(0.5j)

    def test_vacuum_commutator(self):
        pos, mom = build_quadratures(12, sigma=1.0)
        vac = hg_state(0, 0, (12, 1))
        xp = apply(pos, apply(mom, vac))
        px = apply(mom, apply(pos, vac))
        comm = vac.overlap(TruncatedState(xp.amplitudes - px.amplitudes))
        assert comm == pytest.approx(1j, abs=1e-12)

    @given(
        sigma=st.floats(0.2, 5.0),
        seed=st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=25, deadline=None)
    def test_commutator_on_interior_states(self, sigma, seed):
        dim = 24
        rng = np.random.default_rng(seed)
        vec = np.zeros(dim, dtype=complex)
        # supported well below the truncation edge
        vec[: dim - 5] = rng.normal(size=dim - 5) + 1j * rng.normal(size=dim - 5)
        state = _single_mode(vec).normalized()
        pos, mom = build_quadratures(dim, sigma=sigma)
        xp = apply(pos, apply(mom, state))
        px = apply(mom, apply(pos, state))
        comm = state.overlap(TruncatedState(xp.amplitudes - px.amplitudes))
        assert comm == pytest.approx(1j, abs=1e-10)

    @pytest.mark.parametrize("sigma", [0.3, 1.0, 2.7])
    def test_hermitian(self, sigma):
        pos, mom = build_quadratures(30, sigma=sigma)
        for op in (pos, mom):
            assert np.abs(op.entries - op.entries.conj().T).max() <= 1e-14

    def test_rejects_tiny_dimension(self):
        with pytest.raises(DimensionError):
            build_quadratures(1)

    def test_rejects_nonpositive_width(self):
        with pytest.raises(ValueError):
            build_quadratures(8, sigma=0.0)


class TestOperatorMatrix:
    def test_must_be_square(self):
        with pytest.raises(DimensionError):
            OperatorMatrix(np.zeros((2, 3)), "x")

    def test_axis_tag_checked(self):
        with pytest.raises(DimensionError):
            OperatorMatrix(np.eye(2), "z")

    def test_dagger(self):
        op = OperatorMatrix(np.array([[0.0, 1j], [0.0, 0.0]]), "x")
        assert np.array_equal(op.dagger().entries, np.array([[0.0, 0.0], [-1j, 0.0]]))


class TestApplyAndExpectation:
    def test_identity_leaves_state_unchanged(self):
        state = _single_mode([0.6, 0.8j, 0.0])
        out = apply(OperatorMatrix(np.eye(3), "x"), state)
        assert np.allclose(out.amplitudes, state.amplitudes)

    def test_displacement_on_vacuum_matches_column(self):
        dim = 30
        op = build_displacement(dim, 0.9 + 0.2j)
        out = apply(op, hg_state(0, 0, (dim, 1)))
        assert np.allclose(out.amplitudes[0, :, 0], op.entries[:, 0], atol=1e-14)

    def test_raise_then_lower_scales_by_occupation_plus_one(self):
        dim = 8
        a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
        lower = OperatorMatrix(a, "x")
        raise_ = OperatorMatrix(a.conj().T, "x")
        two = hg_state(2, 0, (dim, 1))
        out = apply(lower, apply(raise_, two))
        assert np.allclose(out.amplitudes, 3.0 * two.amplitudes, atol=1e-14)

    def test_number_operator_expectation(self):
        num = OperatorMatrix(np.diag(np.arange(6, dtype=float)), "x")
        assert expectation(hg_state(1, 0, (6, 1)), num) == pytest.approx(1.0)

    def test_vacuum_position_vanishes(self):
        pos, _ = build_quadratures(10, sigma=1.0)
        assert expectation(hg_state(0, 0, (10, 1)), pos) == pytest.approx(0.0, abs=1e-15)

    def test_coherent_position_mean(self):
        dim = 40
        pos, _ = build_quadratures(dim, sigma=1.0)
        coh = apply(build_displacement(dim, 1.0), hg_state(0, 0, (dim, 1)))
        assert expectation(coh, pos) == pytest.approx(2.0, abs=1e-10)

    def test_dimension_mismatch_rejected(self):
        op = OperatorMatrix(np.eye(4), "x")
        with pytest.raises(DimensionError):
            apply(op, hg_state(0, 0, (6, 1)))

    def test_lateral_operator_addresses_its_own_axis(self):
        pos_y, _ = build_quadratures(3, sigma=1.0, acts_on="y")
        state = hg_state(0, 1, (2, 3))
        moved = apply(pos_y, state)
        # sigma*(a + a^dag)|1> = |0> + sqrt(2)|2> on the lateral axis
        assert moved.amplitudes[0, 0, 0] == pytest.approx(1.0)
        assert moved.amplitudes[0, 0, 2] == pytest.approx(np.sqrt(2.0))

    def test_two_mode_expectation_factorizes(self):
        rng = np.random.default_rng(7)
        phi = rng.normal(size=9) + 1j * rng.normal(size=9)
        chi = rng.normal(size=4) + 1j * rng.normal(size=4)
        phi /= np.linalg.norm(phi)
        chi /= np.linalg.norm(chi)
        joint = TruncatedState(np.einsum("i,j->ij", phi, chi)[None, :, :])
        pos, _ = build_quadratures(9, sigma=1.0)
        single = expectation(_single_mode(phi), pos)
        lifted = expectation(joint, pos)
        assert lifted == pytest.approx(single, abs=1e-12)


class TestTruncationHelpers:
    def test_adaptive_rule_at_zero_coupling(self):
        assert adaptive_dim_x(0, 0.0) == 46

    def test_adaptive_rule_grows_with_coupling(self):
        assert adaptive_dim_x(2, 4.0) == 2 + 64 + 10

    def test_adaptive_rule_rejects_negative_coupling(self):
        with pytest.raises(ValueError):
            adaptive_dim_x(0, -1.0)

    def test_tail_mass_of_edge_state_is_one(self):
        assert tail_mass(hg_state(5, 0, (6, 1)), "x") == pytest.approx(1.0)

    def test_tail_mass_of_low_state_is_zero(self):
        assert tail_mass(hg_state(0, 0, (30, 1)), "x") == 0.0
