"""Builders for simplicial, Grassmannian and posetified posets and oracle link graphs."""

from .grassmannian import (
    DEFAULT_MAX_ELEMENTS,
    HyperplaneEnumerator,
    SubspaceCode,
    build_subspace_poset,
    field_for,
    grassmannian,
    iter_rref,
)
from .link_graphs import BipartiteGraphSpec, LinkGraph, bouquet_graph, link_graph_gprime
from .posetification import coordinate_code, max_up_degree, posetification_weights, posetify
from .qanalog import check_prime_power, gaussian_binomial, q_integer
from .simplicial import (
    FacetList,
    disjoint_simplices,
    facets_of,
    from_facets,
    full_simplex,
    parse_simplex_label,
    simplex_label,
    thickness,
)
from .weights import perturbed_weight_scheme, propagate_weights, standard_weight_scheme

__all__ = [
    "DEFAULT_MAX_ELEMENTS",
    "HyperplaneEnumerator",
    "SubspaceCode",
    "build_subspace_poset",
    "field_for",
    "grassmannian",
    "iter_rref",
    "BipartiteGraphSpec",
    "LinkGraph",
    "bouquet_graph",
    "link_graph_gprime",
    "coordinate_code",
    "max_up_degree",
    "posetification_weights",
    "posetify",
    "check_prime_power",
    "gaussian_binomial",
    "q_integer",
    "FacetList",
    "disjoint_simplices",
    "facets_of",
    "from_facets",
    "full_simplex",
    "parse_simplex_label",
    "simplex_label",
    "thickness",
    "perturbed_weight_scheme",
    "propagate_weights",
    "standard_weight_scheme",
]
