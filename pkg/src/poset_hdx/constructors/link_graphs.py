"""Synthetic link graphs whose random-walk spectra serve as oracles."""

import logging
from dataclasses import dataclass
from typing import Hashable, Iterable

import networkx as nx
import numpy as np
import scipy.linalg

from ..exceptions import BadArgumentsError, NotBipartiteError
from .qanalog import check_prime_power

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BipartiteGraphSpec:
    """A connected bipartite graph with uniform edge weights."""
    graph: nx.Graph

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[Hashable, Hashable]]) -> "BipartiteGraphSpec":
        return cls(nx.Graph(list(edges)))

    @classmethod
    def single_edge(cls) -> "BipartiteGraphSpec":
        return cls(nx.path_graph(2))

    @classmethod
    def path(cls, n: int) -> "BipartiteGraphSpec":
        return cls(nx.path_graph(n))

    @classmethod
    def cycle(cls, n: int) -> "BipartiteGraphSpec":
        return cls(nx.cycle_graph(n))

    @property
    def vertex_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    def validate(self) -> None:
        """
        Raises:
            NotBipartiteError: If the graph is empty, disconnected or not bipartite.
        """
        if self.vertex_count == 0 or not nx.is_connected(self.graph):
            raise NotBipartiteError(message="Link graph must be nonempty and connected")
        if not nx.is_bipartite(self.graph):
            raise NotBipartiteError(message="Link graph must be bipartite")

    def bipartition(self) -> tuple[set, set]:
        self.validate()
        return nx.bipartite.sets(self.graph)

    def walk_spectrum(self) -> np.ndarray:
        """Eigenvalues of the random walk on the graph, descending."""
        return LinkGraph.of(self.graph).spectrum()


@dataclass(frozen=True, eq=False)
class LinkGraph:
    """A graph with its random-walk (row-stochastic) matrix."""
    graph: nx.Graph
    nodes: tuple
    matrix: np.ndarray
    degrees: np.ndarray

    @classmethod
    def of(cls, graph: nx.Graph) -> "LinkGraph":
        nodes = tuple(sorted(graph.nodes, key=repr))
        adjacency = nx.to_numpy_array(graph, nodelist=list(nodes))
        degrees = adjacency.sum(axis=1)
        return cls(graph, nodes, adjacency / degrees[:, None], degrees)

    def spectrum(self) -> np.ndarray:
        """Eigenvalues of the walk via its symmetrization, descending."""
        scale = np.sqrt(self.degrees)
        symmetric = (self.matrix * scale[:, None]) / scale[None, :]
        symmetric = (symmetric + symmetric.T) / 2
        return np.sort(scipy.linalg.eigvalsh(symmetric))[::-1]


def bouquet_graph(p: int, q: int) -> LinkGraph:
    """
    p copies of K_{q+1} glued at one hub vertex.

    The hub row of the walk has entries 1/(pq); every other row 1/q.

    Raises:
        BadArgumentsError: If p < 1 or q is not a prime power.
    """
    if p < 1:
        raise BadArgumentsError(message=f"A bouquet needs p >= 1, got {p}")
    check_prime_power(q)
    graph = nx.Graph()
    hub = ("hub",)
    for c in range(p):
        clique = [hub] + [("spoke", c, i) for i in range(q)]
        graph.add_edges_from(nx.complete_graph(clique).edges)
    return LinkGraph.of(graph)


def link_graph_gprime(G: BipartiteGraphSpec, q: int) -> LinkGraph:
    """
    The graph on V ∪ (E × [q-1]) where every edge {u, v} of G becomes the clique
    on u, v and its q-1 new vertices (e, 1..q-1).

    Raises:
        NotBipartiteError: If G is not connected and bipartite.
    """
    check_prime_power(q)
    G.validate()
    graph = nx.Graph()
    graph.add_nodes_from(("v", v) for v in G.graph.nodes)
    for u, v in G.graph.edges:
        edge = tuple(sorted((u, v), key=repr))
        clique = [("v", u), ("v", v)] + [("e", edge, i) for i in range(1, q)]
        graph.add_edges_from(nx.complete_graph(clique).edges)
    logger.debug(
        f"G' over F_{q}: {graph.number_of_nodes()} vertices from "
        f"{G.vertex_count} vertices and {G.edge_count} edges"
    )
    return LinkGraph.of(graph)
