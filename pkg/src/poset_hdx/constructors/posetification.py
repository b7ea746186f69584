"""Posetification: the subspaces of F_q^n lying in some coordinate subspace V_I."""

import logging
from typing import Mapping, Optional, Union

from ..exceptions import ResourceLimitError
from ..models.poset import ElementId, GradedPoset, WeightScheme
from ..performance import timed_operation
from .grassmannian import (
    DEFAULT_MAX_ELEMENTS,
    SubspaceCode,
    build_subspace_poset,
    iter_rref,
)
from .qanalog import check_prime_power
from .simplicial import FacetList, facets_of, simplex_label
from .weights import standard_weight_scheme

logger = logging.getLogger(__name__)


def coordinate_code(face: frozenset, vertices: tuple[int, ...], q: int) -> SubspaceCode:
    """The coordinate subspace V_I spanned by the basis vectors of ``face``."""
    n = len(vertices)
    columns = sorted(vertices.index(v) for v in face)
    rows = []
    for col in columns:
        row = [0] * n
        row[col] = 1
        rows.append(tuple(row))
    return SubspaceCode(q, n, tuple(rows))


@timed_operation("posetify")
def posetify(
    X: Union[GradedPoset, FacetList],
    q: int,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    irreducible_poly: Optional[str] = None,
) -> tuple[GradedPoset, dict[ElementId, SubspaceCode]]:
    """
    Build V_X facet by facet with global deduplication.

    Vertex ``v`` of X becomes the coordinate of F_q^n at its position among
    the sorted vertices. Each facet I contributes every subspace of V_I.

    Raises:
        NonPureError: If X is not pure.
        ResourceLimitError: If more than ``max_elements`` subspaces are found.
    """
    check_prime_power(q)
    facets = X if isinstance(X, FacetList) else facets_of(X)
    facets.check_pure()
    vertices = facets.vertices
    n = len(vertices)
    seen: dict[SubspaceCode, None] = {}
    for facet in facets.facets:
        columns = tuple(sorted(vertices.index(v) for v in facet))
        for k in range(len(columns) + 1):
            for rows in iter_rref(k, len(columns), q):
                seen.setdefault(SubspaceCode(q, len(columns), rows).embed(columns, n), None)
                if len(seen) > max_elements:
                    raise ResourceLimitError(
                        message=f"Posetification exceeds the cap of {max_elements} elements",
                        details={"q": q, "n": n, "d": facets.d},
                    )
    logger.info(
        f"Posetification over F_{q}: {len(seen)} subspaces from {len(facets.facets)} facets"
    )
    return build_subspace_poset(list(seen), q, facets.d, irreducible_poly)


def posetification_weights(
    poset: GradedPoset,
    facets: FacetList,
    q: int,
    facet_weights: Optional[Mapping[str, float]] = None,
) -> WeightScheme:
    """
    Standard weights on V_X with m(V_I) = m(I) on the tops.

    Args:
        poset: The posetification of ``facets``.
        facets: The complex X.
        q: Field size.
        facet_weights: Weights of the facets of X keyed by simplex label; uniform if omitted.
    """
    if facet_weights is None:
        return standard_weight_scheme(poset)
    top_weights = {
        poset.id_of(coordinate_code(facet, facets.vertices, q).label): facet_weights[
            simplex_label(facet)
        ]
        for facet in facets.facets
    }
    return standard_weight_scheme(poset, top_weights)


def max_up_degree(poset: GradedPoset) -> int:
    """Largest number of covers of a single element of rank >= 0."""
    return max((len(poset.parents[x]) for x in poset.elements if poset.rank(x) >= 0), default=0)
