"""Space-filling design toolkit.

Latin hypercube generation, L2 discrepancy and point-distance
criteria, incremental swap-based optimization, minimum-spanning-tree
diagnostics, subprojection reports, a quasirandom sequence generator
and a benchmark harness that emits plot-ready CSV datasets.
"""

from ._version import __version__
from .bench import BENCH_FIGURES, BENCH_SCALES, bench_csv_text, run_bench
from .criteria import (
    CriterionKind,
    CriterionSpec,
    CriterionValue,
    Direction,
    centered_l2,
    evaluate,
    mc_discrepancy_oracle,
    mindist,
    phi_p,
    star_l2,
    star_l2_squared,
    wraparound_l2,
)
from .design import (
    DesignMatrix,
    LhsDesign,
    LhsVariant,
    LhsViolation,
    atomic_write_text,
    default_rng,
    elementary_swap,
    extract_subprojection,
    format_design_csv,
    generate_centered_lhs,
    generate_random_lhs,
    generate_srs,
    lhs_from_matrix,
    lhs_from_permutations,
    read_design_csv,
    validate_lhs,
    write_design_csv,
)
from .diagnostics import (
    MST,
    FiveNumber,
    MstMetric,
    MstOrder,
    MstSummary,
    SubprojectionReport,
    mst_compare,
    mst_edge_weights,
    mst_summary,
    quantiles,
    subprojection_report,
)
from .errors import (
    DegenerateDesignError,
    DesignIoError,
    SfDesignError,
    StaleStateError,
)
from .incremental import (
    REBUILD_INTERVAL,
    MindistSwapState,
    PhipSwapState,
    ProductSwapState,
    SwapDeltaState,
    apply_swap_delta,
    init_swap_state,
    peek_swap_delta,
)
from .manifest import RunManifest, sha256_file, write_manifest
from .optimize import (
    Algorithm,
    CompareReport,
    CompareRow,
    CompareScenario,
    CompareVariant,
    OptimizationResult,
    OptimizationTrace,
    OptimizerConfig,
    Termination,
    TraceRecord,
    compare_optimizers,
    optimize,
    optimize_ese,
    optimize_geometric_sa,
    optimize_mm_sa,
)
from .sobol import MAX_DIMENSION, SobolConfig, SobolScramble, generate_sobol

__all__ = [
    "__version__",
    # errors
    "SfDesignError",
    "DesignIoError",
    "DegenerateDesignError",
    "StaleStateError",
    # designs
    "DesignMatrix",
    "LhsDesign",
    "LhsVariant",
    "LhsViolation",
    "default_rng",
    "generate_random_lhs",
    "generate_centered_lhs",
    "generate_srs",
    "lhs_from_permutations",
    "lhs_from_matrix",
    "validate_lhs",
    "elementary_swap",
    "extract_subprojection",
    "format_design_csv",
    "write_design_csv",
    "read_design_csv",
    "atomic_write_text",
    # criteria
    "CriterionKind",
    "CriterionSpec",
    "CriterionValue",
    "Direction",
    "centered_l2",
    "wraparound_l2",
    "star_l2",
    "star_l2_squared",
    "mindist",
    "phi_p",
    "evaluate",
    "mc_discrepancy_oracle",
    # incremental evaluation
    "REBUILD_INTERVAL",
    "SwapDeltaState",
    "ProductSwapState",
    "MindistSwapState",
    "PhipSwapState",
    "init_swap_state",
    "peek_swap_delta",
    "apply_swap_delta",
    # diagnostics
    "MstSummary",
    "MstOrder",
    "MstMetric",
    "MST",
    "FiveNumber",
    "mst_edge_weights",
    "mst_summary",
    "mst_compare",
    "quantiles",
    "SubprojectionReport",
    "subprojection_report",
    # sequences
    "MAX_DIMENSION",
    "SobolConfig",
    "SobolScramble",
    "generate_sobol",
    # optimization
    "Algorithm",
    "Termination",
    "OptimizerConfig",
    "TraceRecord",
    "OptimizationTrace",
    "OptimizationResult",
    "optimize",
    "optimize_geometric_sa",
    "optimize_mm_sa",
    "optimize_ese",
    "CompareVariant",
    "CompareScenario",
    "CompareRow",
    "CompareReport",
    "compare_optimizers",
    # artifacts
    "RunManifest",
    "write_manifest",
    "sha256_file",
    "BENCH_FIGURES",
    "BENCH_SCALES",
    "run_bench",
    "bench_csv_text",
]
