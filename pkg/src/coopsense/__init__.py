"""Cooperative-sensing assignment for multi-channel cognitive radio networks."""

from .algorithms import (
    AlgoResult,
    BoundReport,
    CopyGraph,
    SearchTooLargeError,
    brute_force_opt,
    compute_mu,
    greedy_baseline,
    max_weight_matching,
    mgdy_assign,
    mwm_assign,
    random_baseline,
)
from .scenarios import GenConfig, ReductionInstance, generate, load, reduction_instance, save
from .sensing import (
    Assignment,
    Channel,
    InfeasibleAssignmentError,
    ObservationOutcome,
    Scenario,
    SetTooLargeError,
    SuProfile,
    channel_throughput,
    likelihoods,
    single_su_throughput,
    system_throughput,
)

__version__ = "0.1.0"
