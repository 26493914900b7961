"""Combinatorial plane maps of k-planar drawings, forbidden full configurations,
exact discharging and crossing-number bounds."""

from .bounds import (
    best_crossing_lower_bound,
    builtin_linear_bounds,
    crossing_lemma_from_linear,
    density_cap,
    k_planar_density_cap,
    min_config_count,
    peel,
)
from .canon import canonical_code, is_isomorphic, relabel
from .configs import ConfigKind, break_configs, canonical_template, detect, is_free
from .discharging import (
    SCHEME_2P_F5,
    SCHEME_2P_F56,
    SCHEME_3P,
    initial_charges,
    precondition_audit,
    run_scheme,
    verify,
)
from .generators import (
    gen_doubled,
    gen_full_config,
    gen_optimal_2planar,
    gen_pentagonalization_augmented,
    gen_planar_cycle,
    generate,
)
from .planemap import (
    CombinatorialMap,
    Face,
    GraphEdge,
    faces,
    planar_skeleton,
    r_neighbors,
    recover_edges,
    validate,
    vertex_neighbors,
    wedge_neighbor,
)

__version__ = "0.1.0"
