"""Approximate k-coloring toolkit.

Greedy 1-flip local search with recursive warm starts, a per-instance
differentiable solver over a graph-convolution relaxation, the graph
generators behind the benchmark families, and an experiment harness.
"""

from .coloring import (
    HardColoring,
    LossSpec,
    SoftColoring,
    k_d,
    loss_hard,
    loss_soft,
    one_hot,
    round_soft,
)
from .estimators import DiscreteColor, FullColor, FullGCN, ModGCN, TripleColor
from .gcn import (
    ModelParams,
    NormalizedAdjacency,
    TrainConfig,
    WarmStartTarget,
    adamw_init,
    adamw_step,
    detect_oversmoothing,
    forward,
    init_features,
    loss_and_grads,
    normalize_adjacency,
)
from .generators import (
    DegreeSequence,
    FamilySpec,
    gen_erdos_renyi,
    gen_family,
    gen_max_planar,
    gen_regular,
    gen_replica,
)
from .graph import Graph, is_bipartite, parse_graph, write_dimacs, write_edge_list
from .local_search import (
    SearchStats,
    discrete_color,
    full_color,
    random_coloring,
    triple_color,
)
from .planarity import is_planar
from .rng import SearchRng, seed_for
from .train import full_gcn, mod_gcn, pretrain_warmstart

__version__ = "0.1.0"
