"""Expected first meeting time of two random walkers on weighted graphs.

Spectral formulas, exact small-graph oracles, and a reproducible Monte Carlo
simulator for two synchronous walkers.
"""

__version__ = "0.1.0"

from .errors import DomainError, EdgeListError, FitError, GenerationError, NumericWarning, ParityWarning
from .graph import (
    GraphStats,
    WeightedGraph,
    check_assumptions,
    compute_stats,
    load_edge_list,
    save_edge_list,
    transition_probability,
    weighted_degree,
)
from .generators import GeneratorParams, generate_ba, generate_er, params_for_target_degree
from .spectral import SpectralDecomposition, decompose, hitting_time, occupancy_probability
from .meeting import (
    MeetingAnalysis,
    MeetingModel,
    analyze_pairs,
    first_meeting_decomposed,
    first_meeting_time_spectral,
    meeting_error_bound,
    principal_component,
)
from .simulation import SimulationReport, meeting_frequency_fit, monte_carlo_meeting, simulate_first_meeting
from .oracle import ProductChain, exact_first_meeting_time, exact_hitting_time
