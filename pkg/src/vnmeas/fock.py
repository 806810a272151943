"""Truncated states and dense operators for a qubit coupled to a two-mode pointer.

State amplitudes always carry three axes: (qubit, longitudinal mode, lateral
mode).  A pointer without a qubit attached uses a length-1 leading axis so
every operation below is rank-fixed.  Internals work at unit beam width; the
moment layer rescales at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError
from .specfn import displacement_matrix

__all__ = [
    "TruncatedState",
    "OperatorMatrix",
    "build_quadratures",
    "build_displacement",
    "expectation",
    "apply",
    "adaptive_dim_x",
    "tail_mass",
]

_AXIS = {"qubit": 0, "x": 1, "y": 2}


@dataclass(frozen=True)
class TruncatedState:
    """Joint or pointer-only state on the truncated basis.

    amplitudes: complex array of shape (qubit_dim, dim_x, dim_y) with
    qubit_dim in {1, 2}.  Treated as immutable after construction.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 3:
            raise DimensionError(f"state amplitudes must have 3 axes, got {amps.ndim}")
        if amps.shape[0] not in (1, 2):
            raise DimensionError(f"leading qubit axis must have length 1 or 2, got {amps.shape[0]}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def qubit_dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim_x(self) -> int:
        return self.amplitudes.shape[1]

    @property
    def dim_y(self) -> int:
        return self.amplitudes.shape[2]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "TruncatedState":
        n = self.norm()
        if n == 0.0:
            raise DimensionError("cannot normalize a zero state")
        return TruncatedState(self.amplitudes / n)

    def overlap(self, other: "TruncatedState") -> complex:
        if self.amplitudes.shape != other.amplitudes.shape:
            raise DimensionError("overlap requires matching shapes")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense square operator acting on one tensor factor.

    acts_on selects the axis: 'qubit', 'x' (longitudinal) or 'y' (lateral).
    """

    entries: np.ndarray
    acts_on: str

    def __post_init__(self) -> None:
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"operator must be square, got shape {mat.shape}")
        if self.acts_on not in _AXIS:
            raise DimensionError(f"acts_on must be one of {sorted(_AXIS)}, got {self.acts_on!r}")
        object.__setattr__(self, "entries", mat)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.acts_on)


@lru_cache(maxsize=64)
def _ladder(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    a.flags.writeable = False
    return a


def build_quadratures(dim: int, sigma: float = 1.0, acts_on: str = "x") -> tuple[OperatorMatrix, OperatorMatrix]:
    """Position-like and momentum-like quadratures on `dim` Fock levels.

    Position is sigma*(a + a^dag), momentum (i/(2 sigma))*(a^dag - a), so the
    ground state has position variance sigma^2 and momentum variance
    1/(4 sigma^2).
    """
    if dim < 2:
        raise DimensionError(f"need at least 2 levels for quadratures, got {dim}")
    if sigma <= 0:
        raise ValueError(f"beam width must be positive, got {sigma}")
    a = _ladder(dim)
    ad = a.conj().T
    pos = OperatorMatrix(sigma * (ad + a), acts_on)
    mom = OperatorMatrix((0.5j / sigma) * (ad - a), acts_on)
    return pos, mom


def build_displacement(dim: int, xi: complex, acts_on: str = "x") -> OperatorMatrix:
    """Displacement operator D(xi) truncated to `dim` levels."""
    return OperatorMatrix(displacement_matrix(dim, xi), acts_on)


def apply(op: OperatorMatrix, state: TruncatedState) -> TruncatedState:
    """Apply a single-factor operator to a state."""
    axis = _AXIS[op.acts_on]
    amps = state.amplitudes
    if op.dim != amps.shape[axis]:
        raise DimensionError(
            f"operator on {op.acts_on!r} has dim {op.dim}, state axis has {amps.shape[axis]}"
        )
    out = np.tensordot(op.entries, np.moveaxis(amps, axis, 0), axes=(1, 0))
    return TruncatedState(np.moveaxis(out, 0, axis))


def expectation(state: TruncatedState, op: OperatorMatrix) -> complex:
    """<state| op |state> without normalizing the state first."""
    return state.overlap(apply(op, state))


def adaptive_dim_x(n_max: int, s: float) -> int:
    """Longitudinal truncation rule: highest initially occupied level plus
    headroom for a displacement by s/2 with a six-sigma guard band."""
    if s < 0:
        raise ValueError(f"coupling must be non-negative, got {s}")
    return int(n_max) + math.ceil((0.5 * s + 6.0) ** 2) + 10


def tail_mass(state: TruncatedState, acts_on: str = "x", levels: int = 4) -> float:
    """Fraction of the squared norm sitting in the top `levels` indices of
    one axis.  Used as the truncation-adequacy guard."""
    axis = _AXIS[acts_on]
    prob = np.abs(state.amplitudes) ** 2
    total = float(prob.sum())
    if total == 0.0:
        return 0.0
    sl = [slice(None)] * 3
    sl[axis] = slice(-levels, None)
    return float(prob[tuple(sl)].sum()) / total
