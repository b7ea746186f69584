"""Invariant checks for weighted graded posets.

Violations are returned as data; nothing here raises on an invalid input.
"""

import logging

import networkx as nx
import numpy as np

from ..models.enums import ViolationKind
from ..models.poset import GradedPoset, WeightScheme
from ..models.reports import ValidationReport
from .chains import descent_distribution

logger = logging.getLogger(__name__)


def validate_poset(
    poset: GradedPoset, weights: WeightScheme, tol: float = 1e-12
) -> ValidationReport:
    """
    Check every structural and weight invariant of a weighted graded poset.

    Args:
        poset: Poset to check.
        weights: Weight scheme on ``poset``.
        tol: Absolute tolerance for weight equalities.

    Returns:
        ValidationReport listing each violated invariant with offending elements.
    """
    report = ValidationReport()
    _check_structure(poset, report)
    _check_weights(poset, weights, report, tol)
    logger.debug(f"Validation found {len(report.violations)} violation(s)")
    return report


def _check_structure(poset: GradedPoset, report: ValidationReport) -> None:
    bottom = poset.level(-1)
    if len(bottom) != 1:
        report.add(
            ViolationKind.UNIQUE_MINIMUM,
            f"expected one element of rank -1, found {len(bottom)}",
            [poset.label(x) for x in bottom],
        )

    for child, parent in poset.covers():
        jump = poset.rank(parent) - poset.rank(child)
        if jump != 1:
            report.add(
                ViolationKind.GRADING,
                f"cover raises rank by {jump}",
                [poset.label(child), poset.label(parent)],
            )

    for x in poset.elements:
        if not any(poset.rank(y) == poset.d for y in poset.ancestors(x)):
            report.add(ViolationKind.PURITY, "element lies below no top element", [poset.label(x)])

    graph = nx.DiGraph()
    graph.add_nodes_from(poset.elements)
    graph.add_edges_from(poset.covers())
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        report.add(
            ViolationKind.ACYCLIC,
            "cover relation contains a cycle",
            [poset.label(u) for u, _ in cycle],
        )


def _check_weights(
    poset: GradedPoset, weights: WeightScheme, report: ValidationReport, tol: float
) -> None:
    m = weights.m
    for x in poset.elements:
        if not m[x] > 0:
            report.add(
                ViolationKind.WEIGHT_POSITIVE, f"m = {m[x]} is not positive", [poset.label(x)]
            )

    for y in poset.elements:
        if poset.rank(y) < 0:
            continue
        probs = [weights.p.get((x, y), 0.0) for x in poset.children[y]]
        if any(not 0.0 < p <= 1.0 for p in probs):
            report.add(
                ViolationKind.TRANSITION_RANGE,
                "transition probability outside (0, 1]",
                [poset.label(y)],
            )
        if abs(sum(probs) - 1.0) > tol:
            report.add(
                ViolationKind.TRANSITION_SUM,
                f"transition probabilities sum to {sum(probs):.15g}",
                [poset.label(y)],
            )

    for x in poset.elements:
        if poset.is_maximal(x):
            continue
        pushed = sum(weights.p.get((x, y), 0.0) * m[y] for y in poset.parents[x])
        if abs(pushed - m[x]) > tol:
            report.add(
                ViolationKind.WEIGHT_EQUATION,
                f"m = {m[x]:.15g} but weight pushed down from covers is {pushed:.15g}",
                [poset.label(x)],
            )

    if len(poset.level(-1)) == 1:
        smallest = poset.minimum
        if abs(m[smallest] - 1.0) > tol:
            report.add(
                ViolationKind.MINIMUM_WEIGHT,
                f"m(smallest)≠1 (m = {m[smallest]:.15g})",
                [poset.label(smallest)],
            )

    for i in range(-1, poset.d + 1):
        total = float(np.sum(weights.level_masses(poset, i))) if poset.level(i) else 0.0
        if abs(total - 1.0) > tol:
            report.add(ViolationKind.LEVEL_SUM, f"level {i} weights sum to {total:.15g}")

    for y in poset.elements:
        mass = descent_distribution(poset, weights, y)
        per_rank: dict[int, float] = {}
        for x, value in mass.items():
            per_rank[poset.rank(x)] = per_rank.get(poset.rank(x), 0.0) + value
        for k in range(-1, poset.rank(y)):
            total = per_rank.get(k, 0.0)
            if abs(total - 1.0) > tol:
                report.add(
                    ViolationKind.CONSERVATION,
                    f"chain probabilities down to rank {k} sum to {total:.15g}",
                    [poset.label(y)],
                )
