"""Simplicial complexes as graded posets."""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Union

from ..exceptions import BadArgumentsError, NonPureError
from ..models.poset import GradedPoset

logger = logging.getLogger(__name__)


def simplex_label(face: Iterable[int]) -> str:
    """Label of a face, e.g. ``{1,2}``; the empty face is ``{}``."""
    return "{" + ",".join(str(v) for v in sorted(face)) + "}"


def parse_simplex_label(label: str) -> frozenset:
    """Inverse of ``simplex_label``."""
    body = label.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise BadArgumentsError(message="Not a simplex label", element=label)
    inner = body[1:-1].strip()
    return frozenset(int(v) for v in inner.split(",")) if inner else frozenset()


@dataclass(frozen=True)
class FacetList:
    """Facets of a pure simplicial complex over integer vertices."""
    facets: tuple[frozenset, ...]

    @classmethod
    def from_iterable(cls, facets: Iterable[Iterable[int]]) -> "FacetList":
        unique = sorted({frozenset(f) for f in facets}, key=lambda f: sorted(f))
        return cls(tuple(unique))

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set().union(*self.facets))) if self.facets else ()

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def d(self) -> int:
        """Dimension of the complex (facet size minus one)."""
        return len(self.facets[0]) - 1 if self.facets else -1

    def check_pure(self) -> None:
        """
        Raises:
            NonPureError: If facets have different sizes.
        """
        sizes = sorted({len(f) for f in self.facets})
        if len(sizes) > 1:
            raise NonPureError(
                message=f"Facets have mixed sizes {sizes}",
                details={"sizes": sizes},
            )
        if not self.facets or sizes[0] == 0:
            raise BadArgumentsError(message="A complex needs at least one nonempty facet")

    def faces_of_size(self, size: int) -> set[frozenset]:
        return {frozenset(c) for f in self.facets for c in itertools.combinations(sorted(f), size)}


def from_facets(facets: Union[FacetList, Iterable[Iterable[int]]]) -> GradedPoset:
    """
    The face poset of a pure simplicial complex, including the empty face.

    rank(A) = |A| - 1 and covers are one-element extensions.

    Raises:
        NonPureError: If facets have mixed sizes.
    """
    if not isinstance(facets, FacetList):
        facets = FacetList.from_iterable(facets)
    facets.check_pure()
    faces: set[frozenset] = set()
    for facet in facets.facets:
        for size in range(len(facet) + 1):
            faces.update(frozenset(c) for c in itertools.combinations(sorted(facet), size))
    covers = [(face - {v}, face) for face in faces for v in face]
    logger.debug(f"Simplicial complex with {len(faces)} faces from {len(facets.facets)} facets")
    return GradedPoset.from_covers(
        ranks={f: len(f) - 1 for f in faces},
        labels={f: simplex_label(f) for f in faces},
        covers=covers,
        d=facets.d,
    )


def facets_of(poset: GradedPoset) -> FacetList:
    """Recover the facet list of a simplicial poset built by ``from_facets``."""
    return FacetList.from_iterable(
        parse_simplex_label(poset.label(x)) for x in poset.level(poset.d)
    )


def thickness(facets: FacetList) -> int:
    """Largest number of facets sharing a codimension-1 face, minus one."""
    counts: dict[frozenset, int] = {}
    for facet in facets.facets:
        for v in facet:
            ridge = facet - {v}
            counts[ridge] = counts.get(ridge, 0) + 1
    return max(counts.values(), default=1) - 1


def full_simplex(n: int, d: int) -> FacetList:
    """All (d+1)-subsets of {1..n}."""
    return FacetList.from_iterable(itertools.combinations(range(1, n + 1), d + 1))


def disjoint_simplices(count: int, d: int) -> FacetList:
    """``count`` pairwise disjoint d-simplices on consecutive vertices from 1."""
    if count < 1 or d < 0:
        raise BadArgumentsError(message=f"Need count >= 1 and d >= 0, got count={count}, d={d}")
    return FacetList.from_iterable(
        range(i * (d + 1) + 1, (i + 1) * (d + 1) + 1) for i in range(count)
    )
