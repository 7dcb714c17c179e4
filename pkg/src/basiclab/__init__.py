"""Finite-scale tools for basic sets: Sternfeld arrays, decompositions and the norm blow-up."""

from .arrays import (
    PlaneBolt,
    SternfeldArray,
    ValidationReport,
    detect_grid_array,
    detect_plane_bolt,
    gen_hypercube,
    gen_plane_zigzag,
    gen_product,
    validate_array,
)
from .combinatorics import LemmaInstance, abc_partition, check_conditions, lemma_witness
from .core import (
    GridShape,
    PointSet,
    lex_rank,
    lex_unrank,
    min_pairwise_distance,
    parity_sign,
    project,
    voxel_adjacency,
    xi,
)
from .decompose import (
    CoordinateFunctionFamily,
    build_incidence,
    e_iterate,
    e_step,
    extend,
    is_forest,
    min_supnorm,
    solve_exact,
)
from .nonbasic import blowup_experiment, bump, choose_next_m, tail_audit

__version__ = "0.1.0"
