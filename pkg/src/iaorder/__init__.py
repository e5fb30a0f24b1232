"""Aligned transceiver design for multi-cell MIMO downlinks, plus the
user-ordering searches and the Monte-Carlo harness that quantify how much
a good per-cell user ordering is worth."""

from .allocation import AllocationPlan, allocate_ici, cell_solvability_count, effective_channel_budget
from .channels import (
    ChannelSet,
    Ordering,
    SimulationParams,
    SystemConfig,
    apply_ordering,
    channel_set_from_jsonable,
    channel_set_to_jsonable,
    compose,
    derive_seed,
    generate_channels,
    validate_config,
)
from .design import (
    DesignEvaluation,
    TransceiverDesign,
    align_receive,
    alignment_system,
    design_for_ordering,
    evaluate_design,
    transmit_nulling,
)
from .errors import (
    AlignmentRankDeficientError,
    AllocationInfeasibleError,
    ConfigInvalidError,
    IAOrderError,
    NullSpaceEmptyError,
    OrderingMismatchError,
)
from .harness import (
    ALGORITHMS,
    CdfResult,
    ExperimentSpec,
    RunRecord,
    SweepResult,
    gain_db,
    run_cdf,
    run_sweep,
    snr_at_level,
)
from .linalg import default_tolerance, null_space_basis, numerical_rank, orthonormal_range
from .search import (
    CRITERIA,
    OrderingDesignCache,
    SearchTrace,
    alternating_search,
    exhaustive_search,
    objective,
    tested_count,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "AlignmentRankDeficientError",
    "AllocationInfeasibleError",
    "AllocationPlan",
    "CRITERIA",
    "CdfResult",
    "ChannelSet",
    "ConfigInvalidError",
    "DesignEvaluation",
    "ExperimentSpec",
    "IAOrderError",
    "NullSpaceEmptyError",
    "Ordering",
    "OrderingDesignCache",
    "OrderingMismatchError",
    "RunRecord",
    "SearchTrace",
    "SimulationParams",
    "SweepResult",
    "SystemConfig",
    "TransceiverDesign",
    "align_receive",
    "alignment_system",
    "allocate_ici",
    "alternating_search",
    "apply_ordering",
    "cell_solvability_count",
    "channel_set_from_jsonable",
    "channel_set_to_jsonable",
    "compose",
    "default_tolerance",
    "derive_seed",
    "design_for_ordering",
    "effective_channel_budget",
    "evaluate_design",
    "exhaustive_search",
    "gain_db",
    "generate_channels",
    "null_space_basis",
    "numerical_rank",
    "objective",
    "orthonormal_range",
    "run_cdf",
    "run_sweep",
    "snr_at_level",
    "tested_count",
    "transmit_nulling",
    "validate_config",
]
