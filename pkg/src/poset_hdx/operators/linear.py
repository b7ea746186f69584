"""Linear operators between cochain levels and their weighted inner products."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..exceptions import LevelMismatchError
from ..models.poset import Cochain, GradedPoset, WeightScheme


@dataclass(frozen=True, eq=False)
class InnerProductContext:
    """Diagonal weights of one level: <f, g> = sum of m(x) f(x) g(x)."""
    level: int
    m: np.ndarray

    @classmethod
    def of(cls, poset: GradedPoset, weights: WeightScheme, level: int) -> "InnerProductContext":
        return cls(level, weights.level_masses(poset, level))

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(np.dot(self.m * f, g))

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(max(self.inner(f, f), 0.0)))


def _values(f: Union[Cochain, np.ndarray]) -> np.ndarray:
    return f.values if isinstance(f, Cochain) else np.asarray(f, dtype=float)


def weighted_inner_product(f: Cochain, g: Cochain, ctx: InnerProductContext) -> float:
    """
    Weighted inner product of two cochains of the context's level.

    Raises:
        LevelMismatchError: If either cochain lives on another level.
    """
    if f.level != ctx.level or g.level != ctx.level:
        raise LevelMismatchError(
            message=f"Inner product on level {ctx.level} got levels {f.level} and {g.level}",
            level=ctx.level,
        )
    return ctx.inner(f.values, g.values)


@dataclass(frozen=True, eq=False)
class LinearOp:
    """
    A dense operator C^source -> C^target carrying the weights of both levels.

    Attributes:
        name: Operator symbol, e.g. ``U_1`` or ``M+_0``.
        source_level: Level of the input cochains.
        target_level: Level of the output cochains.
        matrix: Dense matrix indexed by level positions (rows = target).
        poset: Poset defining the levels.
        weights: Weights defining the inner products.
        flags: Free-form caveats, e.g. possible non-self-adjointness.
    """
    name: str
    source_level: int
    target_level: int
    matrix: np.ndarray
    poset: GradedPoset
    weights: WeightScheme
    flags: tuple[str, ...] = ()

    @property
    def source_context(self) -> InnerProductContext:
        return InnerProductContext.of(self.poset, self.weights, self.source_level)

    @property
    def target_context(self) -> InnerProductContext:
        return InnerProductContext.of(self.poset, self.weights, self.target_level)

    @property
    def is_square(self) -> bool:
        return self.source_level == self.target_level

    def apply(self, f: Cochain) -> Cochain:
        """
        Raises:
            LevelMismatchError: If ``f`` is not on the source level.
        """
        if f.level != self.source_level:
            raise LevelMismatchError(
                message=f"{self.name} acts on level {self.source_level}, got {f.level}",
                level=f.level,
            )
        return Cochain(self.target_level, self.matrix @ f.values)

    def __matmul__(self, other: "LinearOp") -> "LinearOp":
        """Composition ``self after other``."""
        if other.target_level != self.source_level:
            raise LevelMismatchError(
                message=f"Cannot compose {self.name} after {other.name}",
                level=other.target_level,
            )
        return LinearOp(
            name=f"{self.name}{other.name}",
            source_level=other.source_level,
            target_level=self.target_level,
            matrix=self.matrix @ other.matrix,
            poset=self.poset,
            weights=self.weights,
            flags=tuple(dict.fromkeys(self.flags + other.flags)),
        )

    def symmetrized(self) -> np.ndarray:
        """W^(1/2) M W^(-1/2); symmetric exactly when M is self-adjoint."""
        if not self.is_square:
            raise LevelMismatchError(message=f"{self.name} is not an endomorphism")
        scale = np.sqrt(self.source_context.m)
        return (self.matrix * scale[:, None]) / scale[None, :]

    def self_adjoint_residual(self) -> float:
        """max |S - S^T| of the symmetrization."""
        s = self.symmetrized()
        return float(np.max(np.abs(s - s.T))) if s.size else 0.0

    def quadratic(self, f: Union[Cochain, np.ndarray], g: Union[Cochain, np.ndarray]) -> float:
        """<M f, g> in the target inner product."""
        return self.target_context.inner(self.matrix @ _values(f), _values(g))
