"""Weighted spectra, connectivity and expansion certificates."""

from .certificates import (
    certify_eposet,
    certify_one_sided,
    certify_two_sided,
    fit_eposet_constants,
    link_rows,
    measured_two_sided,
    regular_eposet_constants,
)
from .connectivity import is_connected, link_connectivity, locally_connected
from .eigen import (
    nonzero_eigenvalues,
    nontrivial_basis,
    restricted_top_eigenvalue,
    symmetric_eigenvalues,
    weighted_operator_norm,
    weighted_spectrum,
)

__all__ = [
    "certify_eposet",
    "certify_one_sided",
    "certify_two_sided",
    "fit_eposet_constants",
    "link_rows",
    "measured_two_sided",
    "regular_eposet_constants",
    "is_connected",
    "link_connectivity",
    "locally_connected",
    "nonzero_eigenvalues",
    "nontrivial_basis",
    "restricted_top_eigenvalue",
    "symmetric_eigenvalues",
    "weighted_operator_norm",
    "weighted_spectrum",
]
