"""Doubly-marked sphere triangulations, peeling explorations and exact laws."""
from .cmap import CLASSES, MULTI_EDGE, SIMPLE, Triangulation, dumps, loads
from .counting import (chain_transitions, count_disk_triangulations,
                       count_sphere_configurations)
from .enumerate import brute_force_disk_count, enumerate_triangulations, universe
from .explore import (ExplorationTrace, Necklace, PeelStep, assemble, eden_exploration,
                      explore_at, interface_faces, percolation_exploration, reference_path,
                      reshuffle_necklaces)
from .laws import (LawComparison, chain_law, compare_explorations, eden_chain, eden_law,
                   passage_time_law, path_independence, percolation_law, reshuffle_law,
                   reshuffle_tv, tv_distance, two_sided_eden_experiment, two_sided_exact)

__all__ = [
    "CLASSES", "MULTI_EDGE", "SIMPLE", "Triangulation", "dumps", "loads",
    "chain_transitions", "count_disk_triangulations", "count_sphere_configurations",
    "brute_force_disk_count", "enumerate_triangulations", "universe",
    "ExplorationTrace", "Necklace", "PeelStep", "assemble", "eden_exploration", "explore_at",
    "interface_faces", "percolation_exploration", "reference_path", "reshuffle_necklaces",
    "LawComparison", "chain_law", "compare_explorations", "eden_chain", "eden_law",
    "passage_time_law", "path_independence", "percolation_law", "reshuffle_law", "reshuffle_tv",
    "tv_distance", "two_sided_eden_experiment", "two_sided_exact",
]
