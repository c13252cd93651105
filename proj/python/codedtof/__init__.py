"""Low-coherence sensing matrices for coded pulse-based ToF sensing."""

from ._core import (
    SPEED_OF_LIGHT_M_PER_NS,
    AlgorithmError,
    CameraConfig,
    ConfigError,
    DerivedGrid,
    Kernel,
    RecoveryResult,
    ShiftResult,
    __version__,
    analyze,
    apply_shifts,
    build_kernel,
    coherence,
    delay_to_depth,
    derive_grid,
    gen_gcomb,
    gen_peg,
    gen_random,
    gen_she,
    greedy_shift_search,
    matched_filter,
    measure,
    min_chordal_distance,
    omp,
    random_shifts,
    synthesize,
    tanner_girth,
    uniform_shifts,
    validate_config,
)

__all__ = [
    "SPEED_OF_LIGHT_M_PER_NS",
    "AlgorithmError",
    "CameraConfig",
    "ConfigError",
    "DerivedGrid",
    "Kernel",
    "RecoveryResult",
    "ShiftResult",
    "__version__",
    "analyze",
    "apply_shifts",
    "build_kernel",
    "coherence",
    "delay_to_depth",
    "derive_grid",
    "gen_gcomb",
    "gen_peg",
    "gen_random",
    "gen_she",
    "greedy_shift_search",
    "matched_filter",
    "measure",
    "min_chordal_distance",
    "omp",
    "random_shifts",
    "synthesize",
    "tanner_girth",
    "uniform_shifts",
    "validate_config",
]
