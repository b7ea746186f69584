"""Core data models: graded posets, weight schemes, chains, links and cochains."""

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Optional

import numpy as np

from ..exceptions import InvalidPosetError

ElementId = int
CoverKey = tuple[ElementId, ElementId]


@dataclass(frozen=True, eq=False)
class GradedPoset:
    """
    Finite graded poset with a cover relation.

    Elements are integer handles ``0..len-1`` ordered by ``(rank, label)``;
    every matrix indexing in the package derives from this order. Instances
    are immutable; validity (grading, purity, unique minimum) is checked by
    ``core.validation.validate_poset`` rather than at construction, so that
    malformed inputs can still be reported on.

    Attributes:
        ranks: Rank of each element (the minimum has rank -1).
        labels: Human-readable unique name of each element.
        children: Elements covered by each element, sorted.
        parents: Elements covering each element, sorted.
        d: Rank of the poset.
    """
    ranks: tuple[int, ...]
    labels: tuple[str, ...]
    children: tuple[tuple[ElementId, ...], ...]
    parents: tuple[tuple[ElementId, ...], ...]
    d: int
    _levels: dict[int, tuple[ElementId, ...]] = field(init=False, repr=False)
    _positions: tuple[int, ...] = field(init=False, repr=False)
    _label_index: dict[str, ElementId] = field(init=False, repr=False)
    _ancestors: dict[ElementId, frozenset] = field(init=False, repr=False)

    def __post_init__(self):
        levels: dict[int, list[ElementId]] = {}
        positions = []
        for x, r in enumerate(self.ranks):
            bucket = levels.setdefault(r, [])
            positions.append(len(bucket))
            bucket.append(x)
        label_index = {label: x for x, label in enumerate(self.labels)}
        if len(label_index) != len(self.labels):
            raise InvalidPosetError(message="Element labels must be unique")
        object.__setattr__(self, "_levels", {r: tuple(v) for r, v in levels.items()})
        object.__setattr__(self, "_positions", tuple(positions))
        object.__setattr__(self, "_label_index", label_index)
        object.__setattr__(self, "_ancestors", {})

    @classmethod
    def from_covers(
        cls,
        ranks: Mapping[Hashable, int],
        labels: Mapping[Hashable, str],
        covers: Iterable[tuple[Hashable, Hashable]],
        d: Optional[int] = None,
    ) -> "GradedPoset":
        """
        Assemble a poset from arbitrary element keys.

        Args:
            ranks: Rank per element key.
            labels: Label per element key.
            covers: ``(child, parent)`` pairs of element keys.
            d: Rank of the poset; defaults to the largest rank present.

        Returns:
            GradedPoset with elements re-indexed in ``(rank, label)`` order.

        Raises:
            InvalidPosetError: If a cover names an unknown key or labels repeat.
        """
        keys = sorted(ranks, key=lambda k: (ranks[k], labels[k]))
        index = {k: i for i, k in enumerate(keys)}
        children: list[set[int]] = [set() for _ in keys]
        parents: list[set[int]] = [set() for _ in keys]
        for child, parent in covers:
            if child not in index or parent not in index:
                raise InvalidPosetError(
                    message="Cover refers to an unknown element",
                    details={"cover": [str(child), str(parent)]},
                )
            children[index[parent]].add(index[child])
            parents[index[child]].add(index[parent])
        if d is None:
            d = max(ranks.values()) if ranks else -1
        return cls(
            ranks=tuple(ranks[k] for k in keys),
            labels=tuple(labels[k] for k in keys),
            children=tuple(tuple(sorted(c)) for c in children),
            parents=tuple(tuple(sorted(p)) for p in parents),
            d=d,
        )

    def __len__(self) -> int:
        return len(self.ranks)

    @property
    def elements(self) -> range:
        return range(len(self.ranks))

    def level(self, i: int) -> tuple[ElementId, ...]:
        """Elements of rank ``i`` (empty when the level does not exist)."""
        return self._levels.get(i, ())

    def level_size(self, i: int) -> int:
        return len(self.level(i))

    def level_sizes(self) -> list[int]:
        """Sizes of levels -1..d."""
        return [self.level_size(i) for i in range(-1, self.d + 1)]

    def position(self, x: ElementId) -> int:
        """Index of ``x`` inside its own level."""
        return self._positions[x]

    def rank(self, x: ElementId) -> int:
        return self.ranks[x]

    def label(self, x: ElementId) -> str:
        return self.labels[x]

    def id_of(self, label: str) -> ElementId:
        """Look up an element by label."""
        try:
            return self._label_index[label]
        except KeyError:
            raise InvalidPosetError(message="Unknown element label", element=label)

    @property
    def minimum(self) -> ElementId:
        """The unique element of rank -1."""
        bottom = self.level(-1)
        if len(bottom) != 1:
            raise InvalidPosetError(
                message=f"Expected exactly one element of rank -1, found {len(bottom)}"
            )
        return bottom[0]

    def covers(self) -> Iterator[tuple[ElementId, ElementId]]:
        """Iterate ``(child, parent)`` pairs in element order."""
        for parent, kids in enumerate(self.children):
            for child in kids:
                yield child, parent

    def nn(self, y: ElementId) -> int:
        """Number of elements covered by ``y``."""
        return len(self.children[y])

    def is_maximal(self, x: ElementId) -> bool:
        return not self.parents[x]

    def maximal_elements(self) -> tuple[ElementId, ...]:
        return tuple(x for x in self.elements if not self.parents[x])

    def ancestors(self, x: ElementId) -> frozenset:
        """All ``y >= x`` (memoized up-set, ``x`` included)."""
        cached = self._ancestors.get(x)
        if cached is not None:
            return cached
        seen = {x}
        stack = [x]
        while stack:
            for y in self.parents[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        result = frozenset(seen)
        self._ancestors[x] = result
        return result

    def leq(self, x: ElementId, y: ElementId) -> bool:
        """Order relation ``x <= y``."""
        return y in self.ancestors(x)

    def common_parents(self, a: ElementId, b: ElementId) -> list[ElementId]:
        return sorted(set(self.parents[a]) & set(self.parents[b]))

    def common_children(self, a: ElementId, b: ElementId) -> list[ElementId]:
        return sorted(set(self.children[a]) & set(self.children[b]))


@dataclass(frozen=True, eq=False)
class WeightScheme:
    """
    Weights ``m`` per element and transition probabilities per cover.

    ``p`` is keyed by ``(child, parent)`` and stores p(parent -> child).
    """
    m: np.ndarray
    p: Mapping[CoverKey, float]

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def prob(self, parent: ElementId, child: ElementId) -> float:
        """Transition probability p(parent -> child)."""
        return self.p[(child, parent)]

    def level_masses(self, poset: GradedPoset, i: int) -> np.ndarray:
        """Weights of the elements of rank ``i`` in level order."""
        return self.m[list(poset.level(i))]

    def is_standard(self, poset: GradedPoset, tol: float = 1e-12) -> bool:
        """Whether every element distributes uniformly over its children."""
        for child, parent in poset.covers():
            if abs(self.p[(child, parent)] - 1.0 / poset.nn(parent)) > tol:
                return False
        return True


@dataclass(frozen=True)
class Chain:
    """A saturated chain, listed bottom to top (each element covered by the next)."""
    elements: tuple[ElementId, ...]

    @property
    def bottom(self) -> ElementId:
        return self.elements[0]

    @property
    def top(self) -> ElementId:
        return self.elements[-1]

    def __len__(self) -> int:
        return len(self.elements)

    def probability(self, weights: WeightScheme) -> float:
        """Product of the transition probabilities walking down the chain."""
        prob = 1.0
        for child, parent in zip(self.elements, self.elements[1:]):
            prob *= weights.prob(parent, child)
        return prob


@dataclass(frozen=True, eq=False)
class Cochain:
    """Real function on one level, values stored in the poset's level order."""
    level: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @classmethod
    def ones(cls, poset: GradedPoset, level: int) -> "Cochain":
        return cls(level, np.ones(poset.level_size(level)))

    @classmethod
    def zeros(cls, poset: GradedPoset, level: int) -> "Cochain":
        return cls(level, np.zeros(poset.level_size(level)))

    @classmethod
    def indicator(cls, poset: GradedPoset, x: ElementId) -> "Cochain":
        values = np.zeros(poset.level_size(poset.rank(x)))
        values[poset.position(x)] = 1.0
        return cls(poset.rank(x), values)

    def __len__(self) -> int:
        return len(self.values)

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.level, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.level, self.values - other.values)

    def __mul__(self, scalar: float) -> "Cochain":
        return Cochain(self.level, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class Link:
    """
    The weighted subposet above a base element.

    Attributes:
        base: Element of the parent poset the link is taken at.
        base_rank: Rank of ``base`` in the parent poset.
        poset: Elements ``y >= base`` reranked by ``rk(y) - rk(base) - 1``.
        weights: Induced weight scheme (m_x, p_x).
        to_parent: Parent element id of each link element.
        parent_positions: Position of each link element inside its parent level.
    """
    base: ElementId
    base_rank: int
    poset: GradedPoset
    weights: WeightScheme
    to_parent: tuple[ElementId, ...]
    parent_positions: tuple[int, ...]
    from_parent: dict[ElementId, ElementId] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "from_parent", {y: i for i, y in enumerate(self.to_parent)}
        )

    def link_level(self, parent_level: int) -> int:
        """Link level carrying the elements of ``parent_level``."""
        return parent_level - self.base_rank - 1
