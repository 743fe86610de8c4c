"""Greedy trees, generalized Huffman trees and bounds on the minimum
(terminal) distance spectral radius of trees with a given degree sequence."""

from .bounds import BoundsReport, bounds_ab_consistency, bounds_for
from .degseq import (
    DegreeSequence,
    enumerate_tree_sequences,
    family_ab,
    family_starlike,
    parse_sequence,
    validate_tree_sequence,
)
from .metrics import (
    distance_matrix,
    terminal_distance_matrix,
    terminal_wiener,
    tvwwi,
    vwwi,
    vwwi_directed,
    weak_majorizes,
    wiener,
)
from .spectral import dsr, spectral_radius, tdsr, tdsr_ab_closed, terr_ab, tlb_ab_closed
from .tree import (
    GeneratingTuple,
    RootedTree,
    Tree,
    WeightedTree,
    build_bfs_tree,
    build_huffman,
    canonical_form,
    enumerate_trees,
    root_at,
    subordinate_weights,
)

__version__ = "0.1.0"
