"""Local-neighborhood vertex nomination across graphs by soft seeded graph matching."""
from .assignment import AssignmentResult, max_assignment
from .graph import (
    INFINITY,
    EdgeListError,
    Graph,
    SeedMap,
    adjacency_matrix,
    induced_subgraph,
    load_edge_list,
    load_seed_map,
    neighborhood,
    reorder_seeds_first,
    save_edge_list,
)
from .models import (
    CorrelatedPairSpec,
    LabeledPair,
    RdpgSpec,
    SbmSpec,
    UnsharedSpec,
    sample_correlated_bernoulli_pair,
    sample_pair,
    sample_ratio_pair,
    sample_sbm,
)
from .nomination import NominationList, TauResult, VnConfig, evaluate_tau, localize_seeds, nominate
from .sgm import frank_wolfe_sgm, gradient_f, line_search, objective_f, pad_and_center
from .soft import SoftMatch, SoftSgmConfig, random_start, score_row, soft_sgm

__version__ = "0.1.0"
