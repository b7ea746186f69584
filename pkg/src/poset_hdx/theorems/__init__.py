"""Executable verifiers for localization identities, decompositions and spectral bounds."""

from .alev_lau import alev_lau_bound, count_thresholds, link_adjacency_maxima
from .decomposition import (
    bound_up_norm,
    closed_form_tables,
    coefficient_tables,
    grassmannian_up_bound,
    ko_decomposition,
    lazy_choice,
    lazy_tables,
    simplicial_up_bound,
)
from .eposet import (
    at_most_one_common_cover,
    eposet_decomposition,
    eposet_from_two_sided,
    eposet_residual,
    grassmannian_r_table,
    r_table,
    resolve_constants,
    simplicial_r_table,
    two_sided_from_eposet,
    verify_injectivity,
)
from .localization import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    correction_term,
    link_upper_extremes,
    link_walks,
    verify_adjacency_localization,
    verify_basic_localization,
    verify_correction_bound,
    verify_towards_ud_du,
    verify_trickling_localization,
    verify_up_localization,
)
from .posetification import (
    classify_link,
    link_graph_of,
    posetification_certificate,
    posetification_link_oracle,
)
from .trickling import (
    fixed_points,
    grassmannian_orbit,
    map_interval,
    stability,
    trickle_derivative,
    trickle_map,
    trickle_verify,
)

__all__ = [
    "alev_lau_bound",
    "count_thresholds",
    "link_adjacency_maxima",
    "bound_up_norm",
    "closed_form_tables",
    "coefficient_tables",
    "grassmannian_up_bound",
    "ko_decomposition",
    "lazy_choice",
    "lazy_tables",
    "simplicial_up_bound",
    "at_most_one_common_cover",
    "eposet_decomposition",
    "eposet_from_two_sided",
    "eposet_residual",
    "grassmannian_r_table",
    "r_table",
    "resolve_constants",
    "simplicial_r_table",
    "two_sided_from_eposet",
    "verify_injectivity",
    "DEFAULT_SEED",
    "DEFAULT_TRIALS",
    "correction_term",
    "link_upper_extremes",
    "link_walks",
    "verify_adjacency_localization",
    "verify_basic_localization",
    "verify_correction_bound",
    "verify_towards_ud_du",
    "verify_trickling_localization",
    "verify_up_localization",
    "classify_link",
    "link_graph_of",
    "posetification_certificate",
    "posetification_link_oracle",
    "fixed_points",
    "grassmannian_orbit",
    "map_interval",
    "stability",
    "trickle_derivative",
    "trickle_map",
    "trickle_verify",
]
