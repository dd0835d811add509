"""Membership and separation for the hull of the two-variable indicator set.

The package decides membership in the closed convex hull of
{(x, X, z) : X = x x^T, x (1 - z) = 0, x >= 0, z binary} in two variables
through an explicit piecewise description, generates violated supporting
cuts for non-members, and ships an independent numeric oracle for
verification.
"""

from .core import (
    COORD_NAMES,
    DEFAULT_TOL,
    ExtReal,
    HullPoint,
    Tolerances,
    in_relaxation_ctilde,
    in_separable_relaxation,
    persp_prod,
    persp_sq,
    validate_point,
)
from .hull import (
    MembershipReport,
    member_hull,
    member_hull_n1,
    persp_relaxation_member,
    piece_slacks,
    psd3_by_minors,
    rankone_member,
    w_shift,
)
from .oracle import (
    OracleWitness,
    SampleSeed,
    analytic_witness,
    aux_weight_maximizer,
    oracle_member,
    oracle_objective,
    sample_S2,
    sample_hull,
    sample_separable_relaxation,
)
from .regions import (
    PartitionAuditReport,
    Region,
    classify,
    region_matches,
    region_partition_audit,
)
from .separation import (
    Cut,
    SeparationResult,
    psd_support_cut,
    q_gradient,
    q_value,
    separate,
    taylor_cut,
)

__version__ = "0.1.0"

__all__ = [
    "COORD_NAMES",
    "DEFAULT_TOL",
    "Cut",
    "ExtReal",
    "HullPoint",
    "MembershipReport",
    "OracleWitness",
    "PartitionAuditReport",
    "Region",
    "SampleSeed",
    "SeparationResult",
    "Tolerances",
    "analytic_witness",
    "aux_weight_maximizer",
    "classify",
    "in_relaxation_ctilde",
    "in_separable_relaxation",
    "member_hull",
    "member_hull_n1",
    "oracle_member",
    "oracle_objective",
    "persp_prod",
    "persp_relaxation_member",
    "persp_sq",
    "piece_slacks",
    "psd3_by_minors",
    "psd_support_cut",
    "q_gradient",
    "q_value",
    "rankone_member",
    "region_matches",
    "region_partition_audit",
    "sample_S2",
    "sample_hull",
    "sample_separable_relaxation",
    "separate",
    "taylor_cut",
    "validate_point",
    "w_shift",
]
