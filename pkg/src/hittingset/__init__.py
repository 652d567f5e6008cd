"""Exact branch-and-bound solver for minimum hitting set."""

from .bounds import (
    DegreeBuckets,
    Packing,
    build_packing,
    compute_efficiency,
    efficiency_bound,
    greedy_upper_bound,
    local_search_improve,
    max_degree_bound,
    packing_bound,
    sum_degree_bound,
    sum_over_packing_bound,
)
from .hypergraph import (
    Hypergraph,
    InfeasibleInstanceError,
    InstanceError,
    InstanceFormatError,
    OrderedSubsetList,
)
from .instances import (
    InstanceFile,
    appendix_family,
    brute_force_oracle,
    generate_random,
    parse_instance,
    read_instance,
    verify,
)
from .settrie import SetTrie
from .solver import GreedyMode, LocalSearch, Report, Settings, Solver, solve

__version__ = "0.1.0"
