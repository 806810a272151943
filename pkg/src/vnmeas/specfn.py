"""Laguerre polynomials and displacement-operator matrix elements.

Scalar special functions for the closed-form moment expressions, plus the
dense displacement matrix the truncated-oracle route is built on.  Factorial
ratios are evaluated in the log domain throughout: Fock indices reach ~200
at strong coupling and direct factorial products overflow long before that.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

__all__ = [
    "laguerre",
    "laguerre_assoc",
    "displaced_fock_element",
    "displacement_matrix",
]


def _laguerre_up(n: int, eta: int, x: float) -> float:
    """L_n^(eta)(x) for eta >= 0 by the three-term recurrence in the degree."""
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 + eta - x
    for m in range(1, n):
        prev, cur = cur, ((2.0 * m + 1.0 + eta - x) * cur - (m + eta) * prev) / (m + 1.0)
    return cur


def laguerre(n: int, x: float) -> float:
    """Ordinary Laguerre polynomial L_n(x)."""
    if n < 0:
        raise ValueError(f"polynomial degree must be non-negative, got {n}")
    return _laguerre_up(n, 0, float(x))


def laguerre_assoc(n: int, eta: int, x: float) -> float:
    """Generalized Laguerre polynomial L_n^(eta)(x), integer eta of either sign.

    A negative upper index reduces to a non-negative one through
    L_n^(-k)(x) = (-x)^k ((n-k)!/n!) L_{n-k}^(k)(x), valid for k <= n;
    for k > n the polynomial is identically zero.
    """
    if n < 0:
        raise ValueError(f"polynomial degree must be non-negative, got {n}")
    x = float(x)
    if eta >= 0:
        return _laguerre_up(n, eta, x)
    k = -eta
    if k > n:
        return 0.0
    if x == 0.0:
        return 0.0
    # (-x)^k split into sign and log-domain magnitude
    sign = -1.0 if (x > 0.0 and k % 2 == 1) else 1.0
    mag = math.exp(k * math.log(abs(x)) + math.lgamma(n - k + 1) - math.lgamma(n + 1))
    return sign * mag * _laguerre_up(n - k, k, x)


def displaced_fock_element(row: int, col: int, xi: complex) -> complex:
    """Single matrix element <row| D(xi) |col> of the displacement operator.

    Evaluated directly from the closed form: a unit phase to the power of the
    index offset times a log-domain magnitude times a generalized Laguerre
    polynomial in |xi|^2.  Stable for indices up to a few hundred.
    """
    if row < 0 or col < 0:
        raise ValueError("Fock indices must be non-negative")
    xi = complex(xi)
    if xi == 0:
        return complex(row == col)
    r = abs(xi)
    x = r * r
    if row >= col:
        d = row - col
        low = col
        phase = xi / r
    else:
        d = col - row
        low = row
        phase = -xi.conjugate() / r
    logmag = -0.5 * x + d * math.log(r) + 0.5 * (math.lgamma(low + 1) - math.lgamma(low + d + 1))
    return (phase**d) * math.exp(logmag) * _laguerre_up(low, d, x)


def _laguerre_table(dim: int, x: float) -> np.ndarray:
    """table[c, d] = L_c^(d)(x) for 0 <= c, d < dim, recurrence in the degree
    vectorized over the upper index."""
    dvals = np.arange(dim, dtype=float)
    table = np.empty((dim, dim), dtype=float)
    table[0] = 1.0
    if dim > 1:
        table[1] = 1.0 + dvals - x
        for c in range(1, dim - 1):
            table[c + 1] = ((2.0 * c + 1.0 + dvals - x) * table[c] - (c + dvals) * table[c - 1]) / (c + 1.0)
    return table


@lru_cache(maxsize=256)
def _displacement_cached(dim: int, xi: complex) -> np.ndarray:
    r = abs(xi)
    x = r * r
    idx = np.arange(dim)
    rows = idx[:, None]
    cols = idx[None, :]
    offset = np.abs(rows - cols)
    low = np.minimum(rows, cols)
    lnfact = gammaln(np.arange(dim, dtype=float) + 1.0)
    logmag = -0.5 * x + offset * math.log(r) + 0.5 * (lnfact[low] - lnfact[low + offset])
    # upper triangle (row < col) carries the conjugate-reflected phase
    unit = xi / r
    phase = np.where(rows >= cols, unit, -unit.conjugate()) ** offset
    mat = phase * np.exp(logmag) * _laguerre_table(dim, x)[low, offset]
    mat.flags.writeable = False
    return mat


def displacement_matrix(dim: int, xi: complex) -> np.ndarray:
    """Dense Fock-basis matrix of D(xi) on the first `dim` levels.

    The returned array is cached and marked read-only; copy before mutating.
    Columns are exact matrix elements of the untruncated operator, so the
    matrix is unitary only away from the truncation edge.
    """
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    xi = complex(xi)
    if xi == 0:
        eye = np.eye(dim, dtype=complex)
        eye.flags.writeable = False
        return eye
    return _displacement_cached(dim, xi)
