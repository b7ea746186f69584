"""Subspace posets over F_q enumerated through canonical RREF codes."""

import functools
import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Optional

import galois
import numpy as np

from ..exceptions import BadArgumentsError, InvalidPosetError, ResourceLimitError
from ..models.poset import ElementId, GradedPoset
from ..performance import timed_operation
from .qanalog import check_prime_power, gaussian_binomial

logger = logging.getLogger(__name__)

DEFAULT_MAX_ELEMENTS = 200_000

Rows = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SubspaceCode:
    """
    A subspace of F_q^n identified by its reduced row echelon form.

    Field elements are stored in their integer representation 0..q-1, so two
    codes are equal exactly when the subspaces are equal.
    """
    q: int
    n: int
    rows: Rows

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def label(self) -> str:
        """Row-major base-q digit string, rows separated by '/'."""
        if not self.rows:
            return "{0}"
        return "/".join("".join(np.base_repr(v, self.q) for v in row) for row in self.rows)

    @property
    def support(self) -> frozenset:
        """Coordinates on which some vector of the subspace is nonzero."""
        return frozenset(j for row in self.rows for j, v in enumerate(row) if v)

    @property
    def is_coordinate(self) -> bool:
        """Whether the subspace is spanned by standard basis vectors."""
        return all(sum(1 for v in row if v) == 1 for row in self.rows)

    def matrix(self, field: type) -> galois.FieldArray:
        return field(np.array(self.rows, dtype=int).reshape(self.dim, self.n))

    def embed(self, columns: tuple[int, ...], n: int) -> "SubspaceCode":
        """Place the columns of this code at positions ``columns`` of F_q^n."""
        rows = []
        for row in self.rows:
            full = [0] * n
            for value, col in zip(row, columns):
                full[col] = value
            rows.append(tuple(full))
        return SubspaceCode(self.q, n, tuple(rows))


@functools.lru_cache(maxsize=None)
def field_for(q: int, irreducible_poly: Optional[str] = None) -> type:
    """The finite field F_q, optionally with an explicit irreducible polynomial."""
    check_prime_power(q)
    if irreducible_poly is None:
        return galois.GF(q)
    return galois.GF(q, irreducible_poly=irreducible_poly)


def iter_rref(k: int, n: int, q: int) -> Iterator[Rows]:
    """
    Enumerate every k x n RREF matrix over F_q.

    Pivot columns are chosen with ``combinations``; the free entries (non-pivot
    columns right of each row's pivot) run over all field elements.
    """
    if k == 0:
        yield ()
        return
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, n) if j not in pivot_set]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, col in enumerate(pivots):
                rows[i][col] = 1
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


class HyperplaneEnumerator:
    """Computes the codimension-1 subspaces of a subspace in canonical form."""

    def __init__(self, q: int, irreducible_poly: Optional[str] = None):
        self.q = q
        self.field = field_for(q, irreducible_poly)
        self._local: dict[int, list[galois.FieldArray]] = {}

    def _local_codes(self, k: int) -> list[galois.FieldArray]:
        if k not in self._local:
            self._local[k] = [
                self.field(np.array(rows, dtype=int).reshape(k, k + 1))
                for rows in iter_rref(k, k + 1, self.q)
            ]
        return self._local[k]

    def hyperplanes(self, code: SubspaceCode) -> list[SubspaceCode]:
        """All subspaces of dimension ``code.dim - 1`` inside ``code``."""
        k = code.dim - 1
        if k < 0:
            return []
        if k == 0:
            return [SubspaceCode(self.q, code.n, ())]
        basis = code.matrix(self.field)
        result = []
        for coeffs in self._local_codes(k):
            reduced = (coeffs @ basis).row_reduce()
            rows = tuple(tuple(int(v) for v in row) for row in np.asarray(reduced))
            result.append(SubspaceCode(self.q, code.n, rows))
        return result


def build_subspace_poset(
    codes: list[SubspaceCode],
    q: int,
    d: int,
    irreducible_poly: Optional[str] = None,
) -> tuple[GradedPoset, dict[ElementId, SubspaceCode]]:
    """
    Assemble the containment poset of a down-closed family of subspaces.

    Raises:
        InvalidPosetError: If a hyperplane of some code is missing from ``codes``.
    """
    known = set(codes)
    enumerator = HyperplaneEnumerator(q, irreducible_poly)
    covers = []
    for code in codes:
        for child in enumerator.hyperplanes(code):
            if child not in known:
                raise InvalidPosetError(
                    message="Subspace family is not closed under taking subspaces",
                    element=child.label,
                )
            covers.append((child, code))
    poset = GradedPoset.from_covers(
        ranks={c: c.dim - 1 for c in codes},
        labels={c: c.label for c in codes},
        covers=covers,
        d=d,
    )
    table = {poset.id_of(c.label): c for c in codes}
    return poset, table


@timed_operation("grassmannian")
def grassmannian(
    q: int,
    n: int,
    d: int,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    irreducible_poly: Optional[str] = None,
) -> tuple[GradedPoset, dict[ElementId, SubspaceCode]]:
    """
    All subspaces of F_q^n of dimension at most d+1, ranked by dimension - 1.

    Args:
        q: Prime power field size.
        n: Ambient dimension.
        d: Rank of the poset (at most n - 1).
        max_elements: Resource cap on the number of elements.
        irreducible_poly: Optional irreducible polynomial for prime-power q.

    Returns:
        The poset and the table of subspace codes per element.

    Raises:
        BadArgumentsError: If q is not a prime power or d is out of range.
        ResourceLimitError: If the element count exceeds ``max_elements``.
    """
    check_prime_power(q)
    if not 0 <= d <= n - 1:
        raise BadArgumentsError(message=f"Grassmannian poset needs 0 <= d <= n-1, got n={n}, d={d}")
    count = sum(gaussian_binomial(n, k, q) for k in range(d + 2))
    if count > max_elements:
        raise ResourceLimitError(
            message=f"Grassmannian would have {count} elements (cap {max_elements})",
            details={"q": q, "n": n, "d": d, "count": count},
        )
    logger.info(f"Enumerating {count} subspaces of F_{q}^{n} up to dimension {d + 1}")
    codes = [
        SubspaceCode(q, n, rows) for k in range(d + 2) for rows in iter_rref(k, n, q)
    ]
    return build_subspace_poset(codes, q, d, irreducible_poly)
