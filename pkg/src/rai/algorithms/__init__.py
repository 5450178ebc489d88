from .core import (
    AlgorithmState,
    EmpiricalPartition,
    RunResult,
    butterscotch_margin,
    butterscotch_schedule,
    finalize_arm,
    lucb_bounds,
    lucb_empirical_gap,
    lucb_radius,
    membership_check,
    merge_satisfied,
    partition_active,
    vanilla_radius,
)
from .lucb import run_lucb
from .round_robin import run_butterscotch, run_vanilla

ALGORITHMS = ("vanilla", "butterscotch", "lucb")

__all__ = [
    "ALGORITHMS",
    "AlgorithmState",
    "EmpiricalPartition",
    "RunResult",
    "butterscotch_margin",
    "butterscotch_schedule",
    "finalize_arm",
    "lucb_bounds",
    "lucb_empirical_gap",
    "lucb_radius",
    "membership_check",
    "merge_satisfied",
    "partition_active",
    "run_butterscotch",
    "run_lucb",
    "run_vanilla",
    "vanilla_radius",
]
