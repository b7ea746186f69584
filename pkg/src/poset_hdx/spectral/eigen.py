"""Spectra of operators that are self-adjoint for a weighted inner product."""

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from ..exceptions import NotSelfAdjointError
from ..models.reports import SpectralSummary
from ..operators.linear import LinearOp

logger = logging.getLogger(__name__)

SELF_ADJOINT_TOLERANCE = 1e-8


def nontrivial_basis(m: np.ndarray) -> np.ndarray:
    """Orthonormal basis (in symmetrized coordinates) of the complement of the constants."""
    return scipy.linalg.null_space(np.sqrt(m)[None, :])


def symmetric_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a (numerically) symmetric matrix, descending."""
    if matrix.size == 0:
        return np.zeros(0)
    sym = (matrix + matrix.T) / 2
    return np.sort(scipy.linalg.eigh(sym, eigvals_only=True))[::-1]


def weighted_spectrum(
    op: LinearOp,
    tol: float = SELF_ADJOINT_TOLERANCE,
    deflate: bool = True,
) -> SpectralSummary:
    """
    Spectrum of a self-adjoint endomorphism through S = W^(1/2) M W^(-1/2).

    The nontrivial eigenvalues are those of S compressed to the W-orthogonal
    complement of the constants, so repeated eigenvalues 1 of disconnected
    inputs stay visible.

    Args:
        op: Square operator on one level.
        tol: Largest tolerated entry of S - S^T.
        deflate: Whether to split off the constant direction.

    Raises:
        NotSelfAdjointError: If the symmetrization residual exceeds ``tol``.
    """
    s = op.symmetrized()
    residual = op.self_adjoint_residual()
    if residual > tol:
        raise NotSelfAdjointError(
            message=f"{op.name} is not self-adjoint for the weighted inner product",
            level=op.source_level,
            details={"residual": residual, "tolerance": tol},
        )
    eigenvalues = symmetric_eigenvalues(s)
    nontrivial: np.ndarray = np.zeros(0)
    if deflate and len(eigenvalues) > 1:
        basis = nontrivial_basis(op.source_context.m)
        nontrivial = symmetric_eigenvalues(basis.T @ s @ basis)
    elif not deflate:
        nontrivial = eigenvalues[1:]
    lambda_2: Optional[float] = float(nontrivial[0]) if len(nontrivial) else None
    logger.debug(f"Spectrum of {op.name}: {len(eigenvalues)} eigenvalues, lambda_2={lambda_2}")
    return SpectralSummary(
        eigenvalues=tuple(float(v) for v in eigenvalues),
        lambda_max=float(eigenvalues[0]) if len(eigenvalues) else 0.0,
        lambda_2=lambda_2,
        lambda_min=float(eigenvalues[-1]) if len(eigenvalues) else 0.0,
        nontrivial=tuple(float(v) for v in nontrivial),
        residual=residual,
    )


def nonzero_eigenvalues(op: LinearOp, zero_tol: float = 1e-9) -> np.ndarray:
    """Eigenvalues of ``op`` with |value| > ``zero_tol``, descending."""
    values = np.array(weighted_spectrum(op, deflate=False).eigenvalues)
    return values[np.abs(values) > zero_tol]


def weighted_operator_norm(op: LinearOp) -> float:
    """Operator norm for the weighted inner product: largest singular value of S."""
    if op.matrix.size == 0:
        return 0.0
    return float(scipy.linalg.norm(op.symmetrized(), 2))


def restricted_top_eigenvalue(op: LinearOp) -> Optional[float]:
    """Largest eigenvalue of a self-adjoint ``op`` restricted to mean-zero cochains."""
    return weighted_spectrum(op).lambda_2
