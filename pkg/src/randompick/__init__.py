"""Random Pick competitive diffusion: simulation, seed selection, exact
oracles for small graphs and convergence-time benchmarks."""

from .errors import ConvergenceError, GraphFormatError, InfeasibleError, RandomPickError, SizeLimitError
from .graph import Graph, build_graph, diameter, eventually_colorable, s_out_neighborhood_size
from .state import Color, ColorState
from .generators import ConstructionKind, generate_ba, generate_construction, max_coverage_transform
from .dynamics import (PickProfile, RunResult, chain_traversal_time, extended_sequence, final_color_via_es,
                       is_stable, replay, run, sample_profile, step, step_with_picks)
from .exact import (exact_best_seed, exact_expected_convergence_time, exact_expected_red, exact_F,
                    transition_distribution)
from .centrality import (ScoreVector, betweenness, closeness, degree_scores, label_propagation_communities,
                         pagerank)
from .seeding import (GreedyConfig, SeedSelection, baseline_select, community_select, compare_experiment,
                      estimate_spread, greedy_select)
from .bench import ConvergenceStats, QBenchResult, bound_report, pearson, per_node_convergence, q_random_state, q_sweep

__version__ = "0.1.0"
