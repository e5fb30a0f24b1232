"""Exception types shared across the package.

Each error carries a stable ``kind`` slug used by the CLI for
machine-readable error reporting.
"""


class IAOrderError(Exception):
    """Base class for all package-specific errors."""

    kind = "internal-error"


class ConfigInvalidError(IAOrderError):
    """A system or experiment configuration violates a documented constraint."""

    kind = "config-invalid"


class OrderingMismatchError(IAOrderError):
    """A user ordering does not fit the configuration it is applied to."""

    kind = "ordering-mismatch"


class AllocationInfeasibleError(IAOrderError):
    """No interference-grouping plan exists within the antenna budgets."""

    kind = "allocation-infeasible"


class AlignmentRankDeficientError(IAOrderError):
    """A certified plan met a channel draw whose alignment system is
    numerically rank deficient."""

    kind = "alignment-rank-deficient"


class NullSpaceEmptyError(IAOrderError):
    """The transmit-side constraint matrix has no null space left, so no
    zero-forcing beamformer exists."""

    kind = "null-space-empty"
