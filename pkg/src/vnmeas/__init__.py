"""Post-selected von Neumann measurement with structured Gaussian pointer
modes at arbitrary coupling strength.

Two independent computational routes cover every reported quantity: exact
closed forms (`analytic`) and a truncated Fock-space simulation
(`postselect`); `verify` holds them against each other, `snr` combines them
into post-selected signal-to-noise ratios, `sweeps`/`presets` serialize
grids, and `cli` exposes the lot as the `vnmeas` command.
"""

from .analytic import (
    PointerMomentReport,
    first_order_moments,
    norm_coefficient,
    p_expectation,
    reduced_fg_moments,
    snr_strong_limit,
    validity_margin,
    x_expectation,
    y_expectation,
)
from .errors import (
    ClassViolationError,
    ConfigError,
    DegenerateNormalizationError,
    DegeneratePointerError,
    DimensionError,
    OrthogonalSelectionError,
    SeriesBudgetError,
    TruncationError,
    VnmeasError,
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
from .modes import (
    LGCoefficientTable,
    PointerMode,
    hg_state,
    index_map,
    lg_coefficients,
    lg_state,
    parse_mode,
)
from .postselect import (
    QubitState,
    SystemOperator,
    build_mode_state,
    decomposition_residual,
    evolve_decomposed,
    evolve_exponential,
    oracle_final_pointer,
    oracle_moments,
    oracle_report,
    postselection_probability,
    weak_value,
)
from .presets import FigurePanel, figure_panels, generate_figure, list_figures
from .settings import MeasurementSetting, Selection, SweepGrid
from .snr import SnrRequest, SurfaceRow, snr, snr_surface, snr_value
from .specfn import (
    displaced_fock_element,
    displacement_matrix,
    laguerre,
    laguerre_assoc,
)
from .sweeps import (
    CSV_COLUMNS,
    PointRecord,
    evaluate_point,
    evaluate_point_guarded,
    run_settings,
    write_csv,
    write_json,
)
from .verify import acceptance_grid, run_verification

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "VnmeasError",
    "ConfigError",
    "DimensionError",
    "OrthogonalSelectionError",
    "TruncationError",
    "SeriesBudgetError",
    "DegenerateNormalizationError",
    "DegeneratePointerError",
    "ClassViolationError",
    # special functions
    "laguerre",
    "laguerre_assoc",
    "displaced_fock_element",
    "displacement_matrix",
    # truncated space
    "TruncatedState",
    "OperatorMatrix",
    "build_quadratures",
    "build_displacement",
    "expectation",
    "apply",
    "adaptive_dim_x",
    "tail_mass",
    # modes
    "PointerMode",
    "parse_mode",
    "hg_state",
    "lg_state",
    "lg_coefficients",
    "LGCoefficientTable",
    "index_map",
    # settings
    "Selection",
    "MeasurementSetting",
    "SweepGrid",
    # oracle route
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
    # analytic route
    "PointerMomentReport",
    "norm_coefficient",
    "x_expectation",
    "y_expectation",
    "p_expectation",
    "reduced_fg_moments",
    "first_order_moments",
    "validity_margin",
    "snr_strong_limit",
    # snr
    "SnrRequest",
    "SurfaceRow",
    "snr",
    "snr_value",
    "snr_surface",
    # sweeps and presets
    "CSV_COLUMNS",
    "PointRecord",
    "evaluate_point",
    "evaluate_point_guarded",
    "run_settings",
    "write_csv",
    "write_json",
    "FigurePanel",
    "figure_panels",
    "generate_figure",
    "list_figures",
    # verification
    "acceptance_grid",
    "run_verification",
]
