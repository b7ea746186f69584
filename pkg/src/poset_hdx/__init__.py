"""
poset_hdx

Weighted graded posets as high-dimensional expanders: builders, walk
operators, localization properties and executable spectral bounds.
"""

__version__ = "0.1.0"

from .config import ConfigurationError, ConfigurationManager, RunConfig, Tolerances
from .constructors import (
    FacetList,
    from_facets,
    full_simplex,
    gaussian_binomial,
    grassmannian,
    perturbed_weight_scheme,
    posetify,
    standard_weight_scheme,
)
from .core.chains import maximal_chains
from .core.links import LinkTable, build_link, localize_cochain
from .core.validation import validate_poset
from .exceptions import HypothesisError, PosetError
from .models.poset import Chain, Cochain, GradedPoset, Link, WeightScheme
from .models.reports import BoundCheck, ResidualReport, ValidationReport
from .pipeline import SuiteResult, VerificationSuite
from .properties import check_AL, check_TL, check_UL, constants_from_regularity, detect_regularity
from .serialization import PosetDocument, PosetSerializer

__all__ = [
    "ConfigurationError",
    "ConfigurationManager",
    "RunConfig",
    "Tolerances",
    "FacetList",
    "from_facets",
    "full_simplex",
    "gaussian_binomial",
    "grassmannian",
    "perturbed_weight_scheme",
    "posetify",
    "standard_weight_scheme",
    "maximal_chains",
    "LinkTable",
    "build_link",
    "localize_cochain",
    "validate_poset",
    "HypothesisError",
    "PosetError",
    "Chain",
    "Cochain",
    "GradedPoset",
    "Link",
    "WeightScheme",
    "BoundCheck",
    "ResidualReport",
    "ValidationReport",
    "SuiteResult",
    "VerificationSuite",
    "check_AL",
    "check_TL",
    "check_UL",
    "constants_from_regularity",
    "detect_regularity",
    "PosetDocument",
    "PosetSerializer",
]
