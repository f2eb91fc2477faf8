"""Exponential-sum approximation of power-law kernels.

Build certified sums w_l e^(-a_l t) approximating t^(-beta) on a compact
interval, compress their small-exponent heads with Prony's method, report
relative errors on geometric grids, and apply the compressed kernel in a
fast O(L*N) Volterra convolution checked against a direct O(N^2) oracle.
"""

from .design import (
    DesignParams,
    ProvisoError,
    SolverError,
    SweepRow,
    Tolerances,
    design_params,
    design_sweep,
    solve_lower_cutoff,
    solve_step,
    solve_upper_cutoff,
    split_tolerances,
)
from .expsum import (
    ErrorReport,
    ExpSum,
    error_model_first_term,
    evaluate,
    geometric_grid,
    load_expsum,
    max_relative_error,
    relative_error_report,
    rescale,
    save_expsum,
)
from .fastconv import (
    FastConvolver,
    FastConvPreconditionError,
    SignalHistory,
    TimeGrid,
    direct_convolve,
    error_bound,
    fast_convolve,
    uniform_grid,
)
from .gen_bm import BmRecipe, generate_bm
from .gen_de import DeRecipe, generate_de, left_cutoff_count
from .prony import (
    IllConditionedWarning,
    PronyError,
    PronyReduction,
    RootsNotRealPositive,
    ScanResult,
    WeightsNotPositive,
    auto_scan,
    eta_error,
    moments,
    prony_reduce,
    scan_table,
    splice,
)

__all__ = [
    "BmRecipe",
    "DeRecipe",
    "DesignParams",
    "ErrorReport",
    "ExpSum",
    "FastConvPreconditionError",
    "FastConvolver",
    "IllConditionedWarning",
    "PronyError",
    "PronyReduction",
    "ProvisoError",
    "RootsNotRealPositive",
    "ScanResult",
    "SignalHistory",
    "SolverError",
    "SweepRow",
    "TimeGrid",
    "Tolerances",
    "WeightsNotPositive",
    "auto_scan",
    "design_params",
    "design_sweep",
    "direct_convolve",
    "error_bound",
    "error_model_first_term",
    "eta_error",
    "evaluate",
    "fast_convolve",
    "generate_bm",
    "generate_de",
    "geometric_grid",
    "left_cutoff_count",
    "load_expsum",
    "max_relative_error",
    "moments",
    "prony_reduce",
    "relative_error_report",
    "rescale",
    "save_expsum",
    "scan_table",
    "solve_lower_cutoff",
    "solve_step",
    "solve_upper_cutoff",
    "splice",
    "split_tolerances",
    "uniform_grid",
]

__version__ = "0.1.0"
