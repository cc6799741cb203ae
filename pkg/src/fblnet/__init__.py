"""Packet error rate of deadline-constrained multi-terminal TDMA networks
under finite- and infinite-blocklength coding, with best-relay and
best-antenna cooperative path selection and explicit CSI-acquisition cost.
"""

from .config import (
    Regime,
    SystemConfig,
    TopologySnr,
    Variant,
    effective_budget,
    load_config,
    payload_bits,
)
from .dists import (
    BlocklengthDistribution,
    GridMismatch,
    best_of_iid,
    convolve,
    from_pmf_dict,
    min_of,
    min_of_independent,
    point_mass,
    single_hop_dist_fbl,
    single_hop_dist_ibl,
)
from .fbl import (
    InfeasibleBlocklength,
    channel_dispersion,
    fbl_error_prob,
    ibl_min_blocklength,
    minimal_blocklength,
    q_func,
    q_inv,
    shannon_capacity,
    snr_for_blocklength,
)
from .mc import McEstimate, PathCosts, estimate_per, simulate_frame
from .paths import (
    best_antenna_dist,
    best_relay_dist,
    build_packet_dists,
    chosen_cost_dist,
    relay_choice_probs,
    two_hop_relay_dist,
)
from .per import PerResult, evaluate, expected_link_error, per_fbl, per_ibl, schedule_probs
from .sweep import SweepSpec, run_sweep, second_differences

__version__ = "0.1.0"

__all__ = [
    "BlocklengthDistribution",
    "GridMismatch",
    "InfeasibleBlocklength",
    "McEstimate",
    "PathCosts",
    "PerResult",
    "Regime",
    "SweepSpec",
    "SystemConfig",
    "TopologySnr",
    "Variant",
    "best_antenna_dist",
    "best_of_iid",
    "best_relay_dist",
    "build_packet_dists",
    "channel_dispersion",
    "chosen_cost_dist",
    "convolve",
    "effective_budget",
    "estimate_per",
    "evaluate",
    "expected_link_error",
    "fbl_error_prob",
    "from_pmf_dict",
    "ibl_min_blocklength",
    "load_config",
    "min_of",
    "min_of_independent",
    "minimal_blocklength",
    "payload_bits",
    "per_fbl",
    "per_ibl",
    "point_mass",
    "q_func",
    "q_inv",
    "relay_choice_probs",
    "run_sweep",
    "schedule_probs",
    "second_differences",
    "shannon_capacity",
    "simulate_frame",
    "single_hop_dist_fbl",
    "single_hop_dist_ibl",
    "snr_for_blocklength",
    "two_hop_relay_dist",
]
