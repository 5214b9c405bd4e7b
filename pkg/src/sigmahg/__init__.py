"""Toolkit for sigma-hypergraphs H(n, r, q | sigma): exact k-independence
numbers, matching constructions under divisibility regimes, colouring
feasibility bounds, and brute-force oracles for certification."""

from .core import (
    Edge,
    HypergraphSpec,
    Matching,
    NoEdges,
    NoRepresentation,
    Sigma,
    SigmaHypergraphError,
    ValidationError,
    VerificationReport,
    Vertex,
    VertexSet,
    count_edges,
    enumerate_edges,
    frobenius_decompose,
    is_edge,
    make_edge,
    make_spec,
    verify_matching,
)
from .independence import (
    ColouringBounds,
    FeasibleSequence,
    alpha,
    alpha_k,
    alpha_k_witness,
    alpha_value,
    colouring_bounds,
    enumerate_maximal_feasible,
    is_k_independent,
    max_intersection_edge,
)
from .matching import (
    DiagonalLatinSquare,
    MatchingReport,
    NoSuchDesign,
    RegimeError,
    RGoodSplit,
    all_ones_maximum_matching,
    best_matching,
    canonicalize,
    contract,
    diagonal_perfect_matching,
    dls_matching,
    expand,
    find_r_good_split,
    gcd_unmatched_lower_bound,
    generate_dls,
    greedy_matching,
    packing_matching,
    r_good_maximum_matching,
    rectangular_maximum_matching,
)
from .oracle import (
    BudgetExceeded,
    OracleBudget,
    bf_alpha_k,
    bf_colouring_spectrum,
    bf_max_intersection,
    bf_max_matching,
)

__version__ = "0.1.0"
