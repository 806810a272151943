"""Transverse pointer modes: rectangular (HG) and rotationally indexed (LG).

The longitudinal axis couples to the measurement; the lateral axis comes
along for the ride and is what the vortex modes mix.  An LG mode of radial
index p and winding l is a fixed unitary combination of the HG modes on the
anti-diagonal of total order 2p + |l|; `lg_coefficients` carries that change
of basis and everything downstream (states, moment kernels) reuses it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DimensionError
from .fock import TruncatedState

__all__ = [
    "PointerMode",
    "parse_mode",
    "hg_state",
    "lg_state",
    "lg_coefficients",
    "LGCoefficientTable",
    "index_map",
]

_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)  # exact powers of i


def index_map(p: int, l: int) -> tuple[int, int, int, int]:
    """(alpha, beta, mu, nu) for LG_{p,l}: HG-ladder indices alpha = p + max(l, 0),
    beta = p + max(-l, 0), total order mu = 2p + |l|, and nu = l kept for sign
    bookkeeping."""
    if p < 0:
        raise ConfigError(f"radial index must be non-negative, got {p}")
    alpha = p + max(l, 0)
    beta = p + max(-l, 0)
    return alpha, beta, alpha + beta, l


@dataclass(frozen=True)
class PointerMode:
    """Tagged transverse mode: family 'hg' with indices (n, m) or family 'lg'
    with indices (p, l); l may be negative."""

    family: str
    index1: int
    index2: int

    def __post_init__(self) -> None:
        if self.family not in ("hg", "lg"):
            raise ConfigError(f"mode family must be 'hg' or 'lg', got {self.family!r}")
        if self.index1 < 0:
            raise ConfigError(f"first mode index must be non-negative, got {self.index1}")
        if self.family == "hg" and self.index2 < 0:
            raise ConfigError(f"lateral index must be non-negative, got {self.index2}")

    @classmethod
    def hg(cls, n: int, m: int = 0) -> "PointerMode":
        return cls("hg", n, m)

    @classmethod
    def lg(cls, p: int, l: int) -> "PointerMode":
        return cls("lg", p, l)

    @property
    def n(self) -> int:
        assert self.family == "hg"
        return self.index1

    @property
    def m(self) -> int:
        assert self.family == "hg"
        return self.index2

    @property
    def p(self) -> int:
        assert self.family == "lg"
        return self.index1

    @property
    def l(self) -> int:
        assert self.family == "lg"
        return self.index2

    @property
    def n_max_x(self) -> int:
        """Highest longitudinal Fock level the bare mode occupies."""
        if self.family == "hg":
            return self.index1
        alpha, beta, _, _ = index_map(self.index1, self.index2)
        return alpha + beta

    @property
    def dim_y_needed(self) -> int:
        """Lateral truncation that keeps every moment exact: the coupling only
        reaches one level above the bare mode's lateral support."""
        if self.family == "hg":
            return self.index2 + 2
        alpha, beta, _, _ = index_map(self.index1, self.index2)
        return alpha + beta + 2

    def label(self) -> str:
        if self.family == "hg":
            return f"hg:{self.index1}" if self.index2 == 0 else f"hg:{self.index1},{self.index2}"
        return f"lg:{self.index1},{self.index2}"

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.label()


_MODE_RE = re.compile(r"^(hg|lg):(-?\d+)(?:,(-?\d+))?$")


def parse_mode(text: str) -> PointerMode:
    """Parse 'hg:n', 'hg:n,m' or 'lg:p,l' (l may be negative)."""
    m = _MODE_RE.match(text.strip().lower())
    if not m:
        raise ConfigError(f"unrecognized mode spec {text!r}; expected hg:n[,m] or lg:p,l")
    family, first, second = m.group(1), int(m.group(2)), m.group(3)
    if family == "lg":
        if second is None:
            raise ConfigError(f"mode spec {text!r} is missing the winding index; expected lg:p,l")
        return PointerMode.lg(first, int(second))
    return PointerMode.hg(first, 0 if second is None else int(second))


def hg_state(n: int, m: int, dims: tuple[int, int]) -> TruncatedState:
    """Pointer-only basis state |n, m> on the given (dim_x, dim_y) truncation."""
    dim_x, dim_y = dims
    if not (0 <= n < dim_x and 0 <= m < dim_y):
        raise DimensionError(f"mode ({n},{m}) does not fit in truncation {dims}")
    amps = np.zeros((1, dim_x, dim_y), dtype=complex)
    amps[0, n, m] = 1.0
    return TruncatedState(amps)


@dataclass(frozen=True)
class LGCoefficientTable:
    """Change of basis from one LG mode to the HG anti-diagonal.

    entries[(j, k)] is the amplitude contributed by the (j, k) term of the
    double binomial expansion; the HG cell it lands in is
    (alpha + beta - j - k, j + k).  Several (j, k) pairs share a cell, so the
    physical per-cell amplitudes are the constrained sums over j + k = const.
    """

    alpha: int
    beta: int
    entries: dict[tuple[int, int], complex]

    def cell_amplitudes(self) -> np.ndarray:
        """amps[m] = amplitude on HG cell (alpha + beta - m, m)."""
        total = self.alpha + self.beta
        amps = np.zeros(total + 1, dtype=complex)
        for (j, k), c in sorted(self.entries.items()):
            amps[j + k] += c
        return amps


@lru_cache(maxsize=128)
def lg_coefficients(alpha: int, beta: int) -> LGCoefficientTable:
    """Expansion coefficients of the LG mode with ladder indices (alpha, beta).

    C_{j,k} = (1/sqrt(2))^(alpha+beta) (-1)^k i^(j+k)
              sqrt((alpha+beta-j-k)! (j+k)! / (alpha! beta!)) C(alpha,j) C(beta,k).
    Factorial square roots go through lgamma; binomials stay exact integers.
    """
    if alpha < 0 or beta < 0:
        raise ConfigError(f"ladder indices must be non-negative, got ({alpha}, {beta})")
    total = alpha + beta
    half = 0.5 ** (0.5 * total)  # (1/sqrt 2)^total
    lognorm = -0.5 * (math.lgamma(alpha + 1) + math.lgamma(beta + 1))
    entries: dict[tuple[int, int], complex] = {}
    for j in range(alpha + 1):
        for k in range(beta + 1):
            m = j + k
            mag = half * math.comb(alpha, j) * math.comb(beta, k) * math.exp(
                lognorm + 0.5 * (math.lgamma(total - m + 1) + math.lgamma(m + 1))
            )
            sign = -1.0 if k % 2 else 1.0
            entries[(j, k)] = sign * mag * _I_POW[m % 4]
    return LGCoefficientTable(alpha, beta, entries)


def lg_state(p: int, l: int, dims: tuple[int, int]) -> TruncatedState:
    """Pointer-only LG_{p,l} state expanded over HG cells on the truncation."""
    alpha, beta, total, _ = index_map(p, l)
    dim_x, dim_y = dims
    if total >= dim_x or total >= dim_y:
        raise DimensionError(
            f"LG ({p},{l}) needs {total + 1} levels on both axes, truncation is {dims}"
        )
    cells = lg_coefficients(alpha, beta).cell_amplitudes()
    amps = np.zeros((1, dim_x, dim_y), dtype=complex)
    for m, c in enumerate(cells):
        amps[0, total - m, m] = c
    return TruncatedState(amps)
