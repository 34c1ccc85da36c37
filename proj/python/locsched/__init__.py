"""Localization scheduling simulator (SFR, DVM, MADRD) backed by a C++ core."""

from ._core import (
    Area,
    DvmConfig,
    MadrdConfig,
    MobilityTrace,
    ParseError,
    Position,
    RunMetrics,
    SfrConfig,
    ValidationError,
    absolute_error,
    default_config,
    distance,
    export_trace,
    generate_gauss_markov,
    generate_rwp,
    import_trace,
    localize,
    oracles,
    run,
    run_paired,
    sweep_summary_csv,
    threshold_accuracy,
)

__all__ = [
    "Area",
    "DvmConfig",
    "MadrdConfig",
    "MobilityTrace",
    "ParseError",
    "Position",
    "RunMetrics",
    "SfrConfig",
    "ValidationError",
    "absolute_error",
    "default_config",
    "distance",
    "export_trace",
    "generate_gauss_markov",
    "generate_rwp",
    "import_trace",
    "localize",
    "oracles",
    "run",
    "run_paired",
    "sweep_summary_csv",
    "threshold_accuracy",
]
