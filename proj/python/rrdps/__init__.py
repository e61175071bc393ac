"""Phase-error bounds, key-rate optimization and round simulation for RRDPS QKD."""

from ._core import (
    BoundResult,
    ChannelModel,
    DegenerateInput,
    ProtocolParams,
    RatePoint,
    SimConfig,
    SimStats,
    SweepConfig,
    binary_entropy,
    detection_rate,
    e_star,
    key_rate,
    omega,
    omega_minus,
    omega_plus,
    optimize_at,
    phase_error_bound,
    run_rounds,
    run_verification,
    segment_approx,
    source_tail,
    estimate_rate_from_sim,
    sweep,
)

__all__ = [
    "BoundResult",
    "ChannelModel",
    "DegenerateInput",
    "ProtocolParams",
    "RatePoint",
    "SimConfig",
    "SimStats",
    "SweepConfig",
    "binary_entropy",
    "detection_rate",
    "e_star",
    "estimate_rate_from_sim",
    "key_rate",
    "omega",
    "omega_minus",
    "omega_plus",
    "optimize_at",
    "phase_error_bound",
    "run_rounds",
    "run_verification",
    "segment_approx",
    "source_tail",
    "sweep",
]
