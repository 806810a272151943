"""Value types shared across the analytic and oracle routes.

A MeasurementSetting pins everything one conditional-pointer evaluation
needs: the transverse mode, the algebraic class of the measured operator,
the coupling, the beam width, and the pre/post-selection expressed both as
a weak value and as the qubit realization that produces it.  Keeping both
here breaks what would otherwise be an import cycle between the closed-form
layer and the simulation layer.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import ConfigError, OrthogonalSelectionError
from .modes import PointerMode

__all__ = [
    "OP_CLASSES",
    "Selection",
    "MeasurementSetting",
    "SweepGrid",
]

OP_CLASSES = ("involutory", "projector")

_TWO_PI = 2.0 * math.pi

# Overlap magnitudes at or below this are treated as orthogonal selection.
ORTHOGONALITY_CUTOFF = 1e-14


@dataclass(frozen=True)
class Selection:
    """Qubit pre-selection angles; post-selection is fixed to the up state.

    theta in [0, pi], phi reduced to [0, 2*pi).
    """

    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not (-1e-12 <= self.theta <= math.pi + 1e-12):
            raise ConfigError(f"polar angle must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "theta", float(min(max(self.theta, 0.0), math.pi)))
        object.__setattr__(self, "phi", float(self.phi) % _TWO_PI)

    @property
    def overlap(self) -> float:
        """|<post|pre>| = cos(theta/2) for this selection geometry."""
        return math.cos(0.5 * self.theta)


def _validate_common(op_class: str, s: float, sigma: float) -> None:
    if op_class not in OP_CLASSES:
        raise ConfigError(f"operator class must be one of {OP_CLASSES}, got {op_class!r}")
    if not (s >= 0.0 and math.isfinite(s)):
        raise ConfigError(f"coupling must be finite and non-negative, got {s}")
    if not (sigma > 0.0 and math.isfinite(sigma)):
        raise ConfigError(f"beam width must be finite and positive, got {sigma}")


@dataclass(frozen=True)
class MeasurementSetting:
    """One fully specified post-selected measurement.

    Construct through from_selection or from_weak_value; the constructors
    keep weak_value, selection and ps_paper mutually consistent.  ps_paper is
    the postselection probability under the reporting convention: the actual
    overlap squared when the selection was given directly, and
    1/(1 + |weak value|^2) when the weak value was given directly (for both
    operator classes; the projector realization has a different overlap, and
    that exact value is reported separately by the oracle route).
    """

    mode: PointerMode
    op_class: str
    s: float
    sigma: float
    weak_value: complex
    selection: Selection
    ps_paper: float

    @property
    def g(self) -> float:
        """Coupling in length units, g = s * sigma."""
        return self.s * self.sigma

    @classmethod
    def from_selection(
        cls,
        mode: PointerMode,
        op_class: str,
        theta: float,
        phi: float,
        s: float,
        sigma: float = 1.0,
    ) -> "MeasurementSetting":
        _validate_common(op_class, s, sigma)
        sel = Selection(theta, phi)
        if sel.overlap <= ORTHOGONALITY_CUTOFF:
            raise OrthogonalSelectionError(
                f"selection theta={theta} is orthogonal to the post-selection; weak value undefined"
            )
        base = math.tan(0.5 * sel.theta) * cmath.exp(1j * sel.phi)
        wv = base if op_class == "involutory" else 0.5 * (1.0 + base)
        return cls(
            mode=mode,
            op_class=op_class,
            s=float(s),
            sigma=float(sigma),
            weak_value=wv,
            selection=sel,
            ps_paper=sel.overlap**2,
        )

    @classmethod
    def from_weak_value(
        cls,
        mode: PointerMode,
        op_class: str,
        weak_value: complex,
        s: float,
        sigma: float = 1.0,
    ) -> "MeasurementSetting":
        _validate_common(op_class, s, sigma)
        wv = complex(weak_value)
        if not (math.isfinite(wv.real) and math.isfinite(wv.imag)):
            raise ConfigError(f"weak value must be finite, got {wv}")
        # invert the qubit weak-value map: tan(theta/2) e^{i phi} equals the
        # weak value itself (involutory) or 2 A_w - 1 (projector)
        z = wv if op_class == "involutory" else 2.0 * wv - 1.0
        theta = 2.0 * math.atan(abs(z))
        phi = cmath.phase(z) % _TWO_PI if z != 0 else 0.0
        return cls(
            mode=mode,
            op_class=op_class,
            s=float(s),
            sigma=float(sigma),
            weak_value=wv,
            selection=Selection(theta, phi),
            ps_paper=1.0 / (1.0 + abs(wv) ** 2),
        )


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid of settings for sweeps and SNR surfaces.

    Exactly one of theta_values / weak_values drives the selection axis.
    Iteration order is fixed: coupling-major, then selection, then phi,
    then mode.  Output files therefore sort the same way every run.
    """

    s_values: tuple[float, ...]
    modes: tuple[PointerMode, ...]
    op_class: str
    theta_values: Optional[tuple[float, ...]] = None
    phi_values: tuple[float, ...] = (0.0,)
    weak_values: Optional[tuple[complex, ...]] = None
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if (self.theta_values is None) == (self.weak_values is None):
            raise ConfigError("exactly one of theta_values / weak_values must be set")
        if not self.s_values:
            raise ConfigError("empty coupling axis")
        if not self.modes:
            raise ConfigError("empty mode axis")
        if self.theta_values is not None and not self.phi_values:
            raise ConfigError("theta-driven grid needs at least one phi")

    def __len__(self) -> int:
        sel = len(self.theta_values) * len(self.phi_values) if self.theta_values is not None else len(self.weak_values)
        return len(self.s_values) * sel * len(self.modes)

    def points(self) -> Iterator[MeasurementSetting]:
        for s in self.s_values:
            if self.theta_values is not None:
                for theta in self.theta_values:
                    for phi in self.phi_values:
                        for mode in self.modes:
                            yield MeasurementSetting.from_selection(
                                mode, self.op_class, theta, phi, s, self.sigma
                            )
            else:
                for wv in self.weak_values:
                    for mode in self.modes:
                        yield MeasurementSetting.from_weak_value(
                            mode, self.op_class, wv, s, self.sigma
                        )
