"""Representative arm identification (RAI) for stochastic multi-armed bandits."""

from .algorithms import ALGORITHMS, RunResult, run_butterscotch, run_lucb, run_vanilla
from .environments import (
    BudgetExceeded,
    Environment,
    RewardOracle,
    SeedPolicy,
    make_environment,
)
from .instance import (
    TASKS,
    ClusterSpec,
    GapReport,
    Instance,
    InstanceError,
    RequirementSpec,
    build_instance,
    butterscotch_upper_bound,
    gap_report,
    lower_bound,
    task_preset,
    vanilla_upper_bound,
)

__version__ = "0.1.0"
