"""Performance toolkit for the HICCUPS corrupted-frame covert channel in
saturated 802.11 DCF WLANs.

Analytical building blocks (backoff chain, fixed-point saturation
throughput, cost/efficiency metrics) plus a seeded Monte Carlo simulator
that validates the closed forms end to end.
"""

from .backoff_chain import (ChainParams, ChainSolution,
                            build_transition_matrix, closed_form_solution,
                            closed_form_tau, stationary_oracle, window_size)
from .errors import NumericalError
from .mc_sim import SimConfig, SimResult, backend, replicate, simulate
from .phy_profiles import (PhyProfile, erp_ofdm_54, fer_from_ber,
                           load_profile, resolve_profile, t_data)
from .saturation_model import (ChannelStateProbs, NetworkParams,
                               StateDurations, ThroughputPoint,
                               baseline_state_durations, channel_state_probs,
                               solve_baseline, solve_hiccups, state_durations)
from .stego_metrics import (CostResult, EfficiencyResult, cost, cost_approx,
                            efficiency, table_cost, table_efficiency)

__version__ = "0.1.0"

__all__ = [
    "ChainParams", "ChainSolution", "ChannelStateProbs", "CostResult",
    "EfficiencyResult", "NetworkParams", "NumericalError", "PhyProfile",
    "SimConfig", "SimResult", "StateDurations", "ThroughputPoint",
    "backend", "baseline_state_durations", "build_transition_matrix",
    "channel_state_probs", "closed_form_solution", "closed_form_tau",
    "cost", "cost_approx", "efficiency", "erp_ofdm_54", "fer_from_ber",
    "load_profile", "replicate", "resolve_profile", "simulate",
    "solve_baseline", "solve_hiccups", "state_durations", "stationary_oracle",
    "t_data", "table_cost", "table_efficiency", "window_size",
]
