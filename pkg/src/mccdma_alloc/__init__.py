"""Joint group, channel and power allocation for downlink MC-CDMA."""

from .allocation import (
    AllocationResult,
    Assignment,
    ConstraintReport,
    allocate,
    assign_groups_improved,
    assign_groups_original,
    fill_channels,
    validate_allocation,
)
from .fading import db_to_amplitude, make_generator, sample_channel_gains
from .model import (
    ChannelGains,
    CombiningScheme,
    PowerMatrix,
    SimConfig,
    build_power_matrix,
    combining_weights,
    required_power,
    target_sinr,
)
from .oracle import enumerate_assignments, exhaustive_optimal

__all__ = [
    "AllocationResult",
    "Assignment",
    "ChannelGains",
    "CombiningScheme",
    "ConstraintReport",
    "PowerMatrix",
    "SimConfig",
    "allocate",
    "assign_groups_improved",
    "assign_groups_original",
    "build_power_matrix",
    "combining_weights",
    "db_to_amplitude",
    "enumerate_assignments",
    "exhaustive_optimal",
    "fill_channels",
    "make_generator",
    "required_power",
    "sample_channel_gains",
    "target_sinr",
    "validate_allocation",
]
