"""Exact analysis of small multigraphs: conductance, spectra, walks, covers."""
from .conductance import BRUTEFORCE_MAX_N, GraphTooLarge, cheeger_interval, phi_graph_bruteforce, phi_set, psi, vol
from .covers import (
    Cover,
    ThickGraph,
    cross_edge_counts,
    disjointify,
    format_cover,
    lambda_param,
    parse_cover,
    read_cover,
    revealed_conductance,
    thick_component,
    thick_graph,
    write_cover,
)
from .local_mixing import (
    LocalMixingResult,
    ReplayResult,
    local_mixing_curve,
    local_mixing_oracle,
    replay_local_mixing,
)
from .multigraph import MultiGraph, format_graph, parse_graph, read_graph, write_graph
from .spectral import EigenSolverError, SpectralSummary, normalized_laplacian, normalized_laplacian_spectrum
from .tv import coarsen, tv, tv_conditioning_check
from .walks import (
    WalkSampler,
    empirical_distribution,
    empirical_tv,
    escape_probability,
    mixing_time_exact,
    point_mass,
    restricted_stationary,
    stationary,
    walk_distribution,
    walk_distributions,
    walk_matrix,
)
