"""Truncated-space oracle for the post-selected measurement.

Builds the joint qubit x pointer state, evolves it exactly (either through
the algebraic branch decomposition of the coupling unitary or through a
dense matrix exponential), projects on the post-selection and reads moments
off the conditional pointer state.  No closed-form moment expression appears
anywhere in this module; agreement with `analytic` is the correctness
argument for both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .analytic import PointerMomentReport
from .errors import (
    ClassViolationError,
    DegenerateNormalizationError,
    OrthogonalSelectionError,
    TruncationError,
)
from .fock import (
    OperatorMatrix,
    TruncatedState,
    adaptive_dim_x,
    apply,
    build_displacement,
    build_quadratures,
    expectation,
    tail_mass,
)
from .modes import PointerMode, hg_state, lg_state
from .settings import ORTHOGONALITY_CUTOFF, MeasurementSetting, Selection

__all__ = [
    "QubitState",
    "SystemOperator",
    "weak_value",
    "postselection_probability",
    "evolve_decomposed",
    "evolve_exponential",
    "decomposition_residual",
    "oracle_final_pointer",
    "oracle_moments",
    "oracle_report",
    "build_mode_state",
]

# Relative population allowed in the top four longitudinal levels before the
# truncation is declared inadequate.  The adaptive dimension rule lands many
# orders of magnitude below this; only manual overrides can trip it.
_TAIL_GUARD = 1e-14


@dataclass(frozen=True)
class QubitState:
    """Two-level system state vector."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(2)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def up(cls) -> "QubitState":
        return cls(np.array([1.0, 0.0]))

    @classmethod
    def down(cls) -> "QubitState":
        return cls(np.array([0.0, 1.0]))

    @classmethod
    def from_selection(cls, sel: Selection) -> "QubitState":
        return cls(
            np.array(
                [
                    math.cos(0.5 * sel.theta),
                    math.sin(0.5 * sel.theta) * np.exp(1j * sel.phi),
                ]
            )
        )


@dataclass(frozen=True)
class SystemOperator:
    """Measured qubit observable together with its declared algebraic class."""

    matrix: np.ndarray
    op_class: str

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex).reshape(2, 2)
        object.__setattr__(self, "matrix", mat)
        sq = mat @ mat
        target = np.eye(2) if self.op_class == "involutory" else mat
        if not np.allclose(sq, target, atol=1e-12):
            raise ClassViolationError(
                f"operator does not satisfy the {self.op_class} identity"
            )

    @classmethod
    def for_class(cls, op_class: str) -> "SystemOperator":
        """Canonical representative: the spin-flip operator, or the projector
        on its +1 eigenstate."""
        sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        if op_class == "involutory":
            return cls(sx, "involutory")
        return cls(0.5 * (np.eye(2) + sx), "projector")


def weak_value(psi_i: QubitState, psi_f: QubitState, op: SystemOperator) -> complex:
    """<f|A|i> / <f|i>, raising if the selection pair is orthogonal."""
    denom = complex(np.vdot(psi_f.amplitudes, psi_i.amplitudes))
    if abs(denom) <= ORTHOGONALITY_CUTOFF:
        raise OrthogonalSelectionError("pre- and post-selection are orthogonal")
    numer = complex(np.vdot(psi_f.amplitudes, op.matrix @ psi_i.amplitudes))
    return numer / denom


def postselection_probability(sel: Selection) -> float:
    """Bare overlap probability of the selection pair, cos^2(theta/2)."""
    return sel.overlap**2


def _join(psi_i: QubitState, pointer: TruncatedState) -> TruncatedState:
    if pointer.qubit_dim != 1:
        raise ClassViolationError("pointer state already carries a qubit factor")
    return TruncatedState(psi_i.amplitudes[:, None, None] * pointer.amplitudes[0])


def _qubit_op(mat: np.ndarray) -> OperatorMatrix:
    return OperatorMatrix(mat, "qubit")


def evolve_decomposed(
    op: SystemOperator, s: float, pointer: TruncatedState, psi_i: QubitState
) -> TruncatedState:
    """Exact finite-coupling evolution through the branch decomposition.

    Involutory class: half-sum of the two eigenbranches, each displacing the
    meter by +-s/2.  Projector class: the kernel branch idles while the range
    branch displaces by s/2.  Either way only displacement operators touch
    the meter, so the truncation behaves exactly like the displaced states.
    """
    joint = _join(psi_i, pointer)
    if s == 0.0:
        return joint
    dim_x = joint.dim_x
    eye = np.eye(2, dtype=complex)
    if op.op_class == "involutory":
        d_plus = build_displacement(dim_x, 0.5 * s, "x")
        d_minus = build_displacement(dim_x, -0.5 * s, "x")
        branch_plus = apply(d_plus, apply(_qubit_op(0.5 * (eye + op.matrix)), joint))
        branch_minus = apply(d_minus, apply(_qubit_op(0.5 * (eye - op.matrix)), joint))
        return TruncatedState(branch_plus.amplitudes + branch_minus.amplitudes)
    d_plus = build_displacement(dim_x, 0.5 * s, "x")
    idle = apply(_qubit_op(eye - op.matrix), joint)
    kicked = apply(d_plus, apply(_qubit_op(op.matrix), joint))
    return TruncatedState(idle.amplitudes + kicked.amplitudes)


@lru_cache(maxsize=16)
def _coupling_propagator(op_bytes: bytes, s: float, dim_x: int) -> np.ndarray:
    op = np.frombuffer(op_bytes, dtype=complex).reshape(2, 2)
    _, mom = build_quadratures(dim_x, 1.0, "x")
    gen = np.kron(op, mom.entries)
    prop = expm(-1j * s * gen)
    prop.flags.writeable = False
    return prop


def evolve_exponential(
    op: SystemOperator, s: float, pointer: TruncatedState, psi_i: QubitState
) -> TruncatedState:
    """Same evolution through a dense matrix exponential of the coupling
    generator.  Slower and truncation-sensitive; exists to check the
    decomposition, not to be used by anything downstream."""
    joint = _join(psi_i, pointer)
    if s == 0.0:
        return joint
    dim_x = joint.dim_x
    prop = _coupling_propagator(op.matrix.tobytes(), s, dim_x)
    flat = joint.amplitudes.reshape(2 * dim_x, joint.dim_y)
    return TruncatedState((prop @ flat).reshape(2, dim_x, joint.dim_y))


def decomposition_residual(
    op: SystemOperator, s: float, pointer: TruncatedState, psi_i: QubitState
) -> float:
    """Largest amplitude difference between the two evolution routes."""
    a = evolve_decomposed(op, s, pointer, psi_i)
    b = evolve_exponential(op, s, pointer, psi_i)
    return float(np.max(np.abs(a.amplitudes - b.amplitudes)))


def build_mode_state(mode: PointerMode, dims: tuple[int, int]) -> TruncatedState:
    """Initial pointer state for a mode spec on the given truncation."""
    if mode.family == "hg":
        return hg_state(mode.n, mode.m, dims)
    return lg_state(mode.p, mode.l, dims)


def _project_up(joint: TruncatedState) -> TruncatedState:
    """Unnormalized conditional pointer state after post-selecting up."""
    return TruncatedState(joint.amplitudes[0:1].copy())


def oracle_final_pointer(
    setting: MeasurementSetting, dim_x: int | None = None
) -> tuple[TruncatedState, float]:
    """(normalized conditional pointer state, exact detection probability).

    dim_x overrides the adaptive longitudinal truncation; the lateral
    truncation is always exact because the coupling never populates lateral
    levels above the initial mode's support plus one.
    """
    mode = setting.mode
    if dim_x is None:
        dim_x = adaptive_dim_x(mode.n_max_x, setting.s)
    dims = (dim_x, mode.dim_y_needed)
    pointer = build_mode_state(mode, dims)
    psi_i = QubitState.from_selection(setting.selection)
    op = SystemOperator.for_class(setting.op_class)
    joint = evolve_decomposed(op, setting.s, pointer, psi_i)
    unnorm = _project_up(joint)
    prob = unnorm.norm() ** 2
    if prob <= 1e-28:
        raise DegenerateNormalizationError(
            "post-selection retains no population at working precision"
        )
    conditional = unnorm.normalized()
    leak = tail_mass(conditional, "x", levels=4)
    if leak > _TAIL_GUARD:
        raise TruncationError(
            f"longitudinal truncation {dim_x} leaks {leak:.2e} of the conditional "
            f"state into the guard band (s={setting.s})"
        )
    return conditional, prob


def oracle_moments(pointer: TruncatedState, sigma: float = 1.0) -> PointerMomentReport:
    """First and second moments of a normalized pointer state.

    Everything is measured at unit width and rescaled: positions by sigma,
    momenta by 1/sigma.  Variances follow from ||op psi||^2 - <op>^2, which
    keeps them non-negative up to rounding.
    """
    pos_x, mom_x = build_quadratures(pointer.dim_x, 1.0, "x")
    pos_y, mom_y = build_quadratures(pointer.dim_y, 1.0, "y")

    def mean_and_square(op: OperatorMatrix) -> tuple[float, float]:
        shifted = apply(op, pointer)
        mean = complex(pointer.overlap(shifted)).real
        return mean, float(np.vdot(shifted.amplitudes, shifted.amplitudes).real)

    x1, x2 = mean_and_square(pos_x)
    y1, y2 = mean_and_square(pos_y)
    px1, px2 = mean_and_square(mom_x)
    py1, _ = mean_and_square(mom_y)
    return PointerMomentReport(
        x_mean=x1 * sigma,
        y_mean=y1 * sigma,
        px_mean=px1 / sigma,
        py_mean=py1 / sigma,
        x_var=(x2 - x1 * x1) * sigma * sigma,
        y_var=(y2 - y1 * y1) * sigma * sigma,
        px_var=(px2 - px1 * px1) / (sigma * sigma),
    )


def oracle_report(
    setting: MeasurementSetting, dim_x: int | None = None
) -> PointerMomentReport:
    """Full oracle pass: conditional moments plus the exact probability."""
    pointer, prob = oracle_final_pointer(setting, dim_x=dim_x)
    return oracle_moments(pointer, setting.sigma).completed(ps_exact=prob)
