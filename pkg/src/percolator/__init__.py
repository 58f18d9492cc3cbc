"""Percolation centrality, exact and approximate."""

from .bounds import (McEraState, Partition, empirical_peeling, eps_bound,
                     era_upper_bound, mcera, sufficient_sample_size,
                     vd_baseline_sample_size, wimpy_variance)
from .exact import (ExactResult, PathExplosionError, brute_force_percolation,
                    exact_all, exact_betweenness, exact_percolation,
                    exact_rho_and_diameter)
from .graph import (EdgeListParseError, Graph, bfs_level_counts,
                    load_edge_list, write_edge_list)
from .percolation import (PercolationModel, load_states,
                          percolation_differences, random_states, save_states)
from .progressive import RunReport, ScheduleConfig, estimate, stopping_condition
from .sampling import (MeetResult, PathBag, bag_estimate,
                       balanced_bidirectional_bfs, pab_sample, prk_sample,
                       sample_pair, sample_paths)

__version__ = "0.1.0"
