"""Command-line interface: build, validate, certify, verify, spectrum and report.

Exit codes: 0 when every verdict holds, 2 when some certificate or check
fails, 1 on input, configuration or I/O errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from .config.config_manager import ConfigurationManager
from .config.models import SUITE_STEPS, ConfigurationError, RunConfig
from .constructors.grassmannian import grassmannian
from .constructors.posetification import posetification_weights, posetify
from .constructors.simplicial import from_facets
from .constructors.weights import perturbed_weight_scheme, standard_weight_scheme
from .core.links import LinkTable
from .core.validation import validate_poset
from .exceptions import BadArgumentsError, PosetError, ResourceLimitError
from .models.poset import GradedPoset, WeightScheme
from .operators.walks import adjacency_operator, down_up_walk, up_down_walk
from .pipeline import VerificationSuite
from .properties.regularity import detect_regularity
from .properties.weight_properties import check_AL, check_TL, check_UL
from .reporting.renderer import ReportRenderer
from .serialization import PosetDocument, PosetSerializer
from .spectral.certificates import certify_eposet, certify_one_sided, certify_two_sided
from .spectral.eigen import weighted_spectrum
from .theorems.eposet import eposet_from_two_sided

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2

TOLERANCE_FLAGS = ("identity", "bound", "uniformity", "weight", "self_adjoint", "rank")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poset-hdx",
        description="Build weighted graded posets and verify their spectral properties",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="Only log errors")
    parser.add_argument("--config", help="JSON config file; its keys override flags")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="Write output here instead of stdout")
    common.add_argument("--jobs", type=int, help="Worker threads for per-link work")
    for name in TOLERANCE_FLAGS:
        common.add_argument(
            f"--tol-{name.replace('_', '-')}", type=float, dest=f"tol_{name}", metavar="TOL"
        )

    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", parents=[common], help="Build a poset file")
    build.add_argument("--facets", help="Facet file (one facet per line)")
    build.add_argument("--grassmannian", action="store_true", help="Subspaces of F_q^n")
    build.add_argument("--posetify", action="store_true", help="Posetify the facet file over F_q")
    build.add_argument("--q", type=int, help="Field size (prime power)")
    build.add_argument("--n", type=int, help="Ambient dimension")
    build.add_argument("--d", type=int, help="Rank of the poset")
    build.add_argument("--jitter", type=float, help="Relative weight jitter (approximate UL)")
    build.add_argument("--jitter-seed", type=int, dest="jitter_seed")
    build.add_argument("--max-elements", type=int, dest="max_elements")

    validate = commands.add_parser("validate", parents=[common], help="Check poset invariants")
    validate.add_argument("input", help="Poset JSON file")

    certify = commands.add_parser("certify", parents=[common], help="Expansion certificates")
    certify.add_argument("input", help="Poset JSON file")
    certify.add_argument("--one-sided", type=float, dest="one_sided", metavar="LAMBDA")
    certify.add_argument("--nu", type=float, dest="two_sided_nu")
    certify.add_argument("--lambda", type=float, dest="two_sided_lambda")
    certify.add_argument("--eposet", choices=["auto", "regular"])
    certify.add_argument("--eposet-lambda", type=float, dest="eposet_lambda")

    for name, help_text in (("verify", "Run the verifier suite"), ("report", "Markdown report")):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("input", help="Poset JSON file")
        sub.add_argument("--only", nargs="+", choices=SUITE_STEPS)
        sub.add_argument("--trials", type=int)
        sub.add_argument("--seed", type=int)
        sub.add_argument("--alpha", type=float)

    spectrum = commands.add_parser("spectrum", parents=[common], help="Operator spectrum")
    spectrum.add_argument("input", help="Poset JSON file")
    spectrum.add_argument("--operator", choices=["adjacency", "up-down", "down-up"])
    spectrum.add_argument("--level", type=int)
    spectrum.add_argument("--dump-matrix", dest="dump_matrix", help="Matrix dump path")
    return parser


def _flags(args: argparse.Namespace) -> Dict[str, Any]:
    """Namespace to RunConfig keys; tolerance flags go into a nested dict."""
    values = {k: v for k, v in vars(args).items() if k not in ("verbose", "quiet", "config")}
    tolerances = {
        name: values.pop(f"tol_{name}")
        for name in TOLERANCE_FLAGS
        if values.get(f"tol_{name}") is not None
    }
    for name in TOLERANCE_FLAGS:
        values.pop(f"tol_{name}", None)
    if tolerances:
        values["tolerances"] = tolerances
    return values


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _emit(text: str, config: RunConfig) -> None:
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {config.out}")
    else:
        sys.stdout.write(text)


def _top_thickness(poset: GradedPoset) -> int:
    """Largest number of tops above one element of rank d-1, minus one."""
    return max((len(poset.parents[x]) for x in poset.level(poset.d - 1)), default=1) - 1


def _weights(poset: GradedPoset, config: RunConfig) -> WeightScheme:
    if config.jitter > 0:
        return perturbed_weight_scheme(poset, config.jitter, config.jitter_seed)
    return standard_weight_scheme(poset)


def cmd_build(config: RunConfig) -> int:
    """Build a simplicial, Grassmannian or posetified poset and write Poset JSON."""
    origin: Dict[str, Any]
    if config.facets:
        facets = PosetSerializer.read_facets(config.facets)
        facet_lists = [sorted(f) for f in facets.facets]
        if config.posetify:
            if config.q is None:
                raise BadArgumentsError(message="--posetify needs --q")
            poset, _ = posetify(facets, config.q, config.max_elements)
            weights = (
                _weights(poset, config)
                if config.jitter > 0
                else posetification_weights(poset, facets, config.q)
            )
            origin = {"kind": "posetification", "q": config.q, "facets": facet_lists}
        else:
            poset = from_facets(facets)
            if len(poset) > config.max_elements:
                raise ResourceLimitError(
                    message=f"Complex has {len(poset)} faces (cap {config.max_elements})"
                )
            weights = _weights(poset, config)
            origin = {"kind": "simplicial", "facets": facet_lists}
    elif config.grassmannian:
        if config.q is None or config.n is None or config.d is None:
            raise BadArgumentsError(message="--grassmannian needs --q, --n and --d")
        poset, _ = grassmannian(config.q, config.n, config.d, config.max_elements)
        weights = _weights(poset, config)
        origin = {"kind": "grassmannian", "q": config.q, "n": config.n, "d": config.d}
    else:
        raise BadArgumentsError(message="build needs --facets or --grassmannian")

    if config.jitter > 0:
        origin["jitter"] = config.jitter
        origin["jitter_seed"] = config.jitter_seed
    summary = {"level_sizes": poset.level_sizes(), "thickness": _top_thickness(poset)}
    logger.info(f"Built poset: levels {summary['level_sizes']}, thickness {summary['thickness']}")
    if config.out:
        PosetSerializer.write_poset(config.out, poset, weights, origin)
        sys.stdout.write(PosetSerializer.dumps({**summary, "out": config.out}))
    else:
        data = PosetSerializer.poset_to_dict(poset, weights, origin)
        sys.stdout.write(PosetSerializer.dumps(data))
    return EXIT_OK


def _load(config: RunConfig) -> PosetDocument:
    if not config.input:
        raise BadArgumentsError(message="An input poset file is required")
    return PosetSerializer.read_poset(config.input)


def cmd_validate(config: RunConfig) -> int:
    """Report every violated poset or weight invariant."""
    document = _load(config)
    report = validate_poset(document.poset, document.weights, config.tolerances.weight)
    _emit(PosetSerializer.dumps(report), config)
    return EXIT_OK if report.is_valid else EXIT_FAILED


def _properties(document: PosetDocument, config: RunConfig) -> Dict[str, Any]:
    poset, weights = document.poset, document.weights
    tol = config.tolerances.uniformity
    properties: Dict[str, Any] = {
        "regularity": detect_regularity(poset),
        "ul": check_UL(poset, weights, tol),
    }
    if weights.is_standard(poset):
        properties["al"] = check_AL(poset, weights, tol)
        if poset.d >= 2:
            properties["tl"] = check_TL(poset, weights, tol)
    return properties


def cmd_certify(config: RunConfig) -> int:
    """Run the requested expansion certificates and the property checks."""
    document = _load(config)
    poset, weights = document.poset, document.weights
    tol = config.tolerances.bound
    table = LinkTable(poset, weights)
    certificates = []
    if config.one_sided is not None:
        certificates.append(
            certify_one_sided(poset, weights, config.one_sided, tol, table, config.jobs)
        )
    if config.two_sided_lambda is not None:
        nu = config.two_sided_nu if config.two_sided_nu is not None else -1.0
        certificates.append(
            certify_two_sided(poset, weights, nu, config.two_sided_lambda, tol, table, config.jobs)
        )
    properties = _properties(document, config)
    if config.eposet is not None:
        regularity = properties["regularity"]
        lam = config.eposet_lambda
        if lam is None:
            lam = eposet_from_two_sided(poset, weights, regularity, table=table, tol=tol).bound
        if lam is None:
            raise BadArgumentsError(message="No eposet bound available; pass --eposet-lambda")
        constants = None
        if config.eposet == "regular":
            constants = {
                j: (1.0 / regularity.n_low[j + 1], 1.0 - 1.0 / regularity.n_low[j + 1])
                for j in range(1, poset.d)
                if regularity.n_low.get(j + 1)
            }
            if len(constants) != poset.d - 1:
                raise BadArgumentsError(message="--eposet regular needs a lower regular poset")
        certificates.append(certify_eposet(poset, weights, lam, constants, regularity, tol))

    verdict = all(c.verdict for c in certificates)
    _emit(
        PosetSerializer.dumps(
            {"certificates": certificates, "properties": properties, "verdict": verdict}
        ),
        config,
    )
    return EXIT_OK if verdict else EXIT_FAILED


def _run_suite(config: RunConfig):
    document = _load(config)
    suite = VerificationSuite(config)
    return suite.run(document.poset, document.weights, config.only, document.origin)


def cmd_verify(config: RunConfig) -> int:
    """Run the verifier suite and emit one BoundCheck per theorem instance."""
    result = _run_suite(config)
    _emit(PosetSerializer.dumps(result), config)
    return EXIT_OK if result.success else EXIT_FAILED


def cmd_report(config: RunConfig) -> int:
    """Run the verifier suite and render a Markdown report."""
    result = _run_suite(config)
    _emit(ReportRenderer().render(result, title=Path(config.input or "poset").name), config)
    return EXIT_OK if result.success else EXIT_FAILED


def cmd_spectrum(config: RunConfig) -> int:
    """Spectrum of one operator, optionally dumping its matrix."""
    document = _load(config)
    poset, weights = document.poset, document.weights
    builders = {
        "adjacency": adjacency_operator,
        "up-down": up_down_walk,
        "down-up": down_up_walk,
    }
    op = builders[config.operator](poset, weights, config.level)
    if config.dump_matrix:
        PosetSerializer.write_matrix(config.dump_matrix, op)
    summary = weighted_spectrum(op, config.tolerances.self_adjoint)
    data = {"operator": op.name, "flags": list(op.flags), **summary.to_dict()}
    _emit(PosetSerializer.dumps(data), config)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "validate": cmd_validate,
    "certify": cmd_certify,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of ``poset-hdx`` and ``python -m poset_hdx``."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)

    manager = ConfigurationManager()
    try:
        manager.load(_flags(args), args.config)
    except ConfigurationError as e:
        errors = e.validation_result.errors if e.validation_result else []
        logger.error(f"{e.message}: {'; '.join(errors)}" if errors else e.message)
        sys.stderr.write(PosetSerializer.dumps({"error": e.message, "details": errors}))
        return EXIT_ERROR

    config = manager.configuration
    try:
        return COMMANDS[config.command or args.command](config)
    except ResourceLimitError as e:
        logger.error(str(e))
        for suggestion in e.get_suggestions():
            logger.error(f"  - {suggestion}")
        sys.stderr.write(PosetSerializer.dumps(e.to_dict()))
        return EXIT_ERROR
    except PosetError as e:
        logger.error(str(e))
        sys.stderr.write(PosetSerializer.dumps(e.to_dict()))
        return EXIT_ERROR
    except OSError as e:
        logger.error(f"I/O error: {e}")
        sys.stderr.write(PosetSerializer.dumps({"error": str(e)}))
        return EXIT_ERROR
