"""
Closed-form spectra of the rank-(d-2) links of a posetification, and the
certificate comparing them with the links of a constructed V_X.

A subspace x of dimension d-1 inside V_X is classified by its coordinate
support S: |S| = d+1 means x lies in a single top V_I, |S| = d means it lies
in the d-dimensional V_S shared by p facets (a bouquet of p cliques), and
|S| = d-1 means x = V_S and its link is G' for the link graph G of S in X.
"""

import logging
from typing import Optional, Union

import networkx as nx
import numpy as np

from ..constructors.grassmannian import SubspaceCode
from ..constructors.link_graphs import BipartiteGraphSpec
from ..constructors.posetification import max_up_degree, posetification_weights, posetify
from ..constructors.qanalog import check_prime_power
from ..constructors.simplicial import FacetList, facets_of, thickness
from ..core.links import LinkTable
from ..exceptions import BadArgumentsError, NotBipartiteError
from ..models.enums import OracleCase
from ..models.poset import ElementId, GradedPoset
from ..models.reports import OracleRow, PosetificationReport
from ..operators.walks import adjacency_operator
from ..performance import timed_operation
from ..spectral.certificates import certify_two_sided, link_rows
from ..spectral.eigen import weighted_spectrum
from .trickling import grassmannian_orbit

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-9


def posetification_link_oracle(
    case: OracleCase,
    q: int,
    p: Optional[int] = None,
    graph: Optional[BipartiteGraphSpec] = None,
) -> list[float]:
    """
    The spectrum of a rank-(d-2) link of a posetification, descending.

    single: {1, -1/q x q}. bouquet(p): {1, (q-1)/q x (p-1), -1/q x (pq-p+1)}.
    gprime(G) with m vertices and |E| edges: (q-2)/q x (|E|-m+1),
    -1/q x ((q-2)|E|+m) and (q-1+lambda_k)/q for the walk eigenvalues
    lambda_1..lambda_(m-1) of G, the last one (-1) excluded.

    Raises:
        BadArgumentsError: If q is not a prime power, p < 1 for a bouquet or a
            gprime case has no graph.
        NotBipartiteError: If the gprime graph is not connected and bipartite.
    """
    check_prime_power(q)
    if case is OracleCase.SINGLE:
        values = [1.0] + [-1.0 / q] * q
    elif case is OracleCase.BOUQUET:
        if p is None or p < 1:
            raise BadArgumentsError(message=f"A bouquet oracle needs p >= 1, got {p}")
        values = [1.0] + [(q - 1) / q] * (p - 1) + [-1.0 / q] * (p * q - p + 1)
    else:
        if graph is None:
            raise BadArgumentsError(message="The gprime oracle needs its link graph G")
        graph.validate()
        m, edges = graph.vertex_count, graph.edge_count
        walk = sorted(graph.walk_spectrum(), reverse=True)[: m - 1]
        values = (
            [(q - 2) / q] * (edges - m + 1)
            + [-1.0 / q] * ((q - 2) * edges + m)
            + [(q - 1 + float(lam)) / q for lam in walk]
        )
    return sorted(values, reverse=True)


def _support_vertices(code: SubspaceCode, vertices: tuple[int, ...]) -> frozenset:
    return frozenset(vertices[c] for c in code.support)


def link_graph_of(facets: FacetList, face: frozenset) -> BipartiteGraphSpec:
    """The graph of X at ``face``: edges F - face over the facets F containing it."""
    edges = [tuple(sorted(f - face)) for f in facets.facets if face <= f]
    graph = nx.Graph()
    graph.add_edges_from(e for e in edges if len(e) == 2)
    return BipartiteGraphSpec(graph)


def classify_link(
    code: SubspaceCode, facets: FacetList
) -> tuple[OracleCase, dict[str, object]]:
    """Oracle case and parameters of a dimension-(d-1) subspace of V_X."""
    support = _support_vertices(code, facets.vertices)
    d = facets.d
    if len(support) == d + 1:
        return OracleCase.SINGLE, {"support": sorted(support)}
    if len(support) == d:
        p = sum(1 for f in facets.facets if support <= f)
        return OracleCase.BOUQUET, {"support": sorted(support), "p": p}
    return OracleCase.GPRIME, {"support": sorted(support)}


def _oracle_row(
    table: LinkTable,
    x: ElementId,
    code: SubspaceCode,
    facets: FacetList,
    q: int,
    tol: float,
) -> OracleRow:
    poset = table.poset
    link = table.link(x)
    measured = weighted_spectrum(adjacency_operator(link.poset, link.weights, 0)).eigenvalues
    case, params = classify_link(code, facets)
    try:
        if case is OracleCase.GPRIME:
            graph = link_graph_of(facets, frozenset(params["support"]))  # type: ignore[arg-type]
            params["edges"] = graph.edge_count
            predicted = posetification_link_oracle(case, q, graph=graph)
        else:
            p = params.get("p")
            predicted = posetification_link_oracle(case, q, p=p)  # type: ignore[arg-type]
    except NotBipartiteError as e:
        params["skipped"] = e.message
        return OracleRow(poset.label(x), case, params, measured, None, None, None)
    if len(predicted) != len(measured):
        return OracleRow(poset.label(x), case, params, measured, tuple(predicted), None, False)
    gap = float(np.max(np.abs(np.array(predicted) - np.array(measured))))
    return OracleRow(poset.label(x), case, params, measured, tuple(predicted), gap, gap <= tol)


@timed_operation("posetification_certificate")
def posetification_certificate(
    X: Union[GradedPoset, FacetList],
    q: int,
    facet_weights: Optional[dict[str, float]] = None,
    tol: float = ORACLE_TOLERANCE,
) -> PosetificationReport:
    """
    Build V_X with standard weights, check every rank-(d-2) link against its
    oracle and certify two-sided expansion with nu = -1/q and
    lambda = max((q-1)/q, measured lambda_2).

    The measured gap lambda_2 - (q-1)/q is reported instead of an a priori
    function of epsilon, where epsilon is the largest lambda_2 of the link
    graphs of the (d-2)-faces of X.
    """
    facets = X if isinstance(X, FacetList) else facets_of(X)
    poset, codes = posetify(facets, q)
    weights = posetification_weights(poset, facets, q, facet_weights)
    table = LinkTable(poset, weights)
    d = facets.d

    epsilon: Optional[float] = None
    if d >= 2:
        for face in facets.faces_of_size(d - 1):
            graph = link_graph_of(facets, face)
            if graph.vertex_count > 1 and nx.is_connected(graph.graph):
                lam2 = float(sorted(graph.walk_spectrum(), reverse=True)[1])
                epsilon = lam2 if epsilon is None else max(epsilon, lam2)

    report = PosetificationReport(
        q=q,
        d=d,
        size=len(poset),
        thickness=thickness(facets),
        thickness_scale=q ** max(2 * d - 4, 0),
        max_up_degree=max_up_degree(poset),
        epsilon=epsilon,
    )
    if d >= 2:
        report.oracle_rows = [
            _oracle_row(table, x, codes[x], facets, q, tol) for x in poset.level(d - 2)
        ]
    rows = link_rows(poset, weights, lam=1.0, table=table)
    highs = [row.lambda2 for row in rows if row.lambda2 is not None]
    lows = [row.lambdamin for row in rows if row.lambdamin is not None]
    report.measured_lambda = max(highs) if highs else None
    report.measured_nu = min(lows) if lows else None
    if epsilon is not None:
        report.predicted_lambda = grassmannian_orbit(q, d, epsilon)[-1]
    lam = max((q - 1) / q, report.measured_lambda or 0.0)
    report.certificate = certify_two_sided(
        poset, weights, nu=-1.0 / q - tol, lam=lam, tol=tol, table=table
    )
    logger.info(
        f"Posetification over F_{q}: {len(report.oracle_rows)} oracle links, "
        f"agreement {report.oracle_agreement}, gap {report.gap}"
    )
    return report
