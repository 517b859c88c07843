# src/core/oracle.py

"""
Planarity number pl(G): exact branch and bound for small graphs and a
randomized maximal-planar-subgraph witness for larger ones.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import networkx as nx
import numpy as np

from src.core.constants import Defaults
from src.core.errors import BudgetExhausted
from src.core.graph import Edge, Graph, is_bipartite
from src.core.plane import RotationSystem, planarity_embed, trace_faces

logger = logging.getLogger("Extractor.Oracle")


@dataclass(frozen=True, slots=True)
class PlanarityResult:
    value: int
    witness: Tuple[Edge, ...]
    rotation: RotationSystem
    exact: bool
    nodes_explored: int


def _witness(g: Graph, edges: List[Edge]) -> RotationSystem:
    subgraph = nx.Graph()
    subgraph.add_nodes_from(range(g.n))
    subgraph.add_edges_from(edges)
    rotation = planarity_embed(subgraph)
    # Tracing faces re-verifies planarity through Euler's formula.
    trace_faces(rotation)
    return rotation


def edge_bound(n: int, e: int, bipartite: bool) -> int:
    if n < 3:
        return e
    return min(e, 2 * n - 4 if bipartite else 3 * n - 6)


class _BudgetHit(Exception):
    pass


class _ComponentSearch:
    """Include-first depth-first search over one component's edges."""

    __slots__ = ['edges', 'bound', 'budget', 'nodes', 'best', 'chosen', 'planar']

    def __init__(self, edges: List[Edge], bound: int, budget: int):
        self.edges = edges
        self.bound = bound
        self.budget = budget
        self.nodes = 0
        self.chosen: List[Edge] = []
        self.planar = nx.Graph()
        self.best: List[Edge] = self._greedy()

    def _greedy(self) -> List[Edge]:
        trial = nx.Graph()
        kept = []
        for u, v in self.edges:
            trial.add_edge(u, v)
            if nx.check_planarity(trial)[0]:
                kept.append((u, v))
            else:
                trial.remove_edge(u, v)
        return kept

    def run(self) -> bool:
        """True when the search completed within budget."""
        try:
            self._branch(0)
        except _BudgetHit:
            return False
        return True

    def _branch(self, index: int) -> None:
        if len(self.best) >= self.bound:
            return
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetHit
        if len(self.chosen) + len(self.edges) - index <= len(self.best):
            return
        if index == len(self.edges):
            self.best = list(self.chosen)
            return
        u, v = self.edges[index]
        self.planar.add_edge(u, v)
        if nx.check_planarity(self.planar)[0]:
            self.chosen.append((u, v))
            self._branch(index + 1)
            self.chosen.pop()
        self.planar.remove_edge(u, v)
        self._branch(index + 1)


def pl_exact(g: Graph, node_budget: int = Defaults.ORACLE_NODE_BUDGET,
             strict: bool = False) -> PlanarityResult:
    """
    Exact pl(G) per connected component. Edges are branched in descending
    degree-sum order; the per-component bound is 3n-6, or 2n-4 when bipartite.
    """
    witness: List[Edge] = []
    nodes = 0
    exact = True
    for comp in g.components():
        local, original = g.induced(comp)
        if local.e == 0:
            continue
        edges = sorted(local.edges(), key=lambda e: (-(local.degree(e[0]) + local.degree(e[1])), e))
        bound = edge_bound(local.n, local.e, is_bipartite(local))
        search = _ComponentSearch(edges, bound, node_budget - nodes)
        exact = search.run() and exact
        nodes += search.nodes
        witness.extend(tuple(sorted((original[u], original[v]))) for u, v in search.best)

    witness.sort()
    if not exact and strict:
        raise BudgetExhausted(f"node budget {node_budget} exhausted with {len(witness)} edges",
                              best=len(witness), nodes=nodes)
    result = PlanarityResult(value=len(witness), witness=tuple(witness),
                             rotation=_witness(g, witness), exact=exact, nodes_explored=nodes)
    logger.info(f"🔎 pl_exact: value={result.value}, exact={exact}, nodes={nodes}")
    return result


def pl_greedy(g: Graph, seed: int) -> PlanarityResult:
    """Maximal planar subgraph by inserting shuffled edges while planarity holds."""
    edges = list(g.edges())
    rng = np.random.default_rng(seed)
    trial = nx.Graph()
    trial.add_nodes_from(range(g.n))
    kept: List[Edge] = []
    for index in rng.permutation(len(edges)).tolist():
        u, v = edges[index]
        trial.add_edge(u, v)
        if nx.check_planarity(trial)[0]:
            kept.append((u, v))
        else:
            trial.remove_edge(u, v)
    kept.sort()
    return PlanarityResult(value=len(kept), witness=tuple(kept), rotation=_witness(g, kept),
                           exact=False, nodes_explored=len(edges))
