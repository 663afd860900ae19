"""RIS-assisted two-way OFDM max-min rate simulator."""

from risofdm._core import (
    Allocation,
    ChannelRealization,
    Codebook,
    ConfigError,
    PhaseVector,
    SolverError,
    SystemConfig,
    TrialResult,
    allocate_subbands,
    build_realization,
    csv_text,
    effective_gain,
    exhaustive_phase_oracle,
    init_phase,
    min_weighted_sumrate,
    monte_carlo,
    psg_optimize,
    run_scheme,
    verify,
    write_csv,
)

__all__ = [
    "Allocation",
    "ChannelRealization",
    "Codebook",
    "ConfigError",
    "PhaseVector",
    "SolverError",
    "SystemConfig",
    "TrialResult",
    "allocate_subbands",
    "build_realization",
    "csv_text",
    "effective_gain",
    "exhaustive_phase_oracle",
    "init_phase",
    "min_weighted_sumrate",
    "monte_carlo",
    "psg_optimize",
    "run_scheme",
    "verify",
    "write_csv",
]

__version__ = "0.1.0"
