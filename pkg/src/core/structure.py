# src/core/structure.py

"""
Reduced-graph analysis: the k parameter, the small-component / all-large
case split, and the bounded-degree spanning tree local search.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from src.core.constants import Defaults
from src.core.errors import (ConfigurationError, NoSwapAvailable, OutOfRange,
                             PreconditionViolated, TriangleNotFound)
from src.core.graph import Edge, Graph
from src.core.regularity import RegularityParams

logger = logging.getLogger("Extractor.Structure")


def as_fraction(gamma: Union[float, Fraction]) -> Fraction:
    return Fraction(gamma).limit_denominator(10 ** 6)


def compute_k(gamma: Union[float, Fraction]) -> int:
    """The unique integer k with k <= 1/(2 gamma) < k + 1."""
    g = as_fraction(gamma)
    if not 0 < g < Fraction(1, 2):
        raise OutOfRange(f"gamma={gamma} outside (0, 1/2)", gamma=float(gamma))
    return math.floor(1 / (2 * g))


@dataclass(frozen=True, slots=True)
class PipelineConfig:
    gamma: float
    k: int
    beta: float
    s: int
    params: RegularityParams
    seed: int = 0
    embed_restarts: int = Defaults.EMBED_RESTARTS
    max_recursion_depth: int = Defaults.MAX_RECURSION_DEPTH
    max_clusters: int = Defaults.MAX_CLUSTERS
    regularity_restarts: int = Defaults.REGULARITY_RESTARTS
    similarity_threshold: float = Defaults.SIMILARITY_THRESHOLD
    waive_size_check: bool = False
    waive_degree_check: bool = False
    allow_low_degree: bool = False

    def __post_init__(self):
        if self.k != compute_k(self.gamma):
            raise ConfigurationError(f"k={self.k} inconsistent with gamma={self.gamma}")
        if self.beta <= 0:
            raise ConfigurationError(f"beta={self.beta} must be positive")
        if self.s < 6 or self.s % 6:
            raise ConfigurationError(
                f"triangulation order s={self.s} must be a multiple of 6 (even, 3-colourable)")

    @classmethod
    def from_gamma(cls, gamma: float, eps: float = Defaults.EPS, d: float = Defaults.D,
                   delta: Optional[float] = None, s: int = Defaults.TRIANGULATION_ORDER,
                   **overrides) -> "PipelineConfig":
        k = compute_k(gamma)
        beta = float(as_fraction(gamma) - Fraction(1, 2 * (k + 1)))
        return cls(gamma=gamma, k=k, beta=beta, s=s,
                   params=RegularityParams(eps=eps, d=d, delta=delta), **overrides)


class SpanningTree:
    """
    Spanning tree over arbitrary vertex ids, kept as an adjacency map.
    score_history holds the score after every local-search swap.
    """

    __slots__ = ['_adj', 'score_history', 'swap_count']

    def __init__(self, vertices: Iterable[int], edges: Iterable[Edge]):
        self._adj: Dict[int, Set[int]] = {v: set() for v in vertices}
        for u, v in edges:
            self._adj[u].add(v)
            self._adj[v].add(u)
        self.score_history: List[int] = []
        self.swap_count = 0

    @property
    def vertices(self) -> List[int]:
        return sorted(self._adj)

    def neighbors(self, v: int) -> Set[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(n) for n in self._adj.values()), default=0)

    def edges(self) -> List[Edge]:
        return sorted((u, v) for u, nbrs in self._adj.items() for v in nbrs if u < v)

    def score(self) -> int:
        return sum(len(n) ** 2 for n in self._adj.values())

    def is_spanning_tree(self) -> bool:
        if not self._adj:
            return False
        if sum(len(n) for n in self._adj.values()) // 2 != len(self._adj) - 1:
            return False
        return len(self.reachable_without(min(self._adj), blocked=None)) == len(self._adj)

    def bfs_order(self, root: int) -> List[Tuple[int, Optional[int]]]:
        """(vertex, parent) pairs in BFS order from root, children by index."""
        order = [(root, None)]
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in sorted(self._adj[v]):
                if u not in seen:
                    seen.add(u)
                    order.append((u, v))
                    queue.append(u)
        return order

    def relabel(self, mapping: Mapping[int, int]) -> "SpanningTree":
        tree = SpanningTree((mapping[v] for v in self._adj),
                            ((mapping[u], mapping[v]) for u, v in self.edges()))
        tree.score_history = list(self.score_history)
        tree.swap_count = self.swap_count
        return tree

    def reachable_without(self, start: int, blocked: Optional[int]) -> Set[int]:
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in self._adj[v]:
                if u != blocked and u not in seen:
                    seen.add(u)
                    queue.append(u)
        return seen

    def swap_edge(self, u: int, v: int, u_new: int) -> None:
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        self._adj[v].add(u_new)
        self._adj[u_new].add(v)

    def __repr__(self) -> str:
        return f"SpanningTree(v={len(self._adj)}, max_degree={self.max_degree()})"


# --- case split ---

@dataclass(frozen=True, slots=True)
class SmallComponent:
    component: List[int]
    triangle: Tuple[int, int, int]


@dataclass(frozen=True, slots=True)
class AllLarge:
    components: List[List[int]] = field(default_factory=list)


CaseSplit = Union[SmallComponent, AllLarge]


def find_triangle(R: Graph, vertices: Sequence[int]) -> Optional[Tuple[int, int, int]]:
    inside = frozenset(vertices)
    for u in sorted(inside):
        for v in sorted(x for x in R.neighbors(u) if x > u and x in inside):
            common = sorted(w for w in R.neighbors(u) & R.neighbors(v) if w > v and w in inside)
            if common:
                return (u, v, common[0])
    return None


def case_split(R: Graph, deltaR: int) -> CaseSplit:
    components = R.components()
    for comp in components:
        if len(comp) < 2 * deltaR:
            triangle = find_triangle(R, comp)
            if triangle is None:
                raise TriangleNotFound(
                    f"component of order {len(comp)} < 2*{deltaR} has no triangle",
                    component=comp)
            logger.info(f"🔺 Case 1: component {comp} smaller than 2*delta(R)={2 * deltaR}")
            return SmallComponent(component=comp, triangle=triangle)
    logger.info(f"🧭 Case 2: {len(components)} component(s), all of order >= {2 * deltaR}")
    return AllLarge(components=components)


# --- bounded-degree spanning tree ---

def bfs_tree(R: Graph) -> SpanningTree:
    edges = []
    seen = [False] * R.n
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in sorted(R.neighbors(v)):
            if not seen[u]:
                seen[u] = True
                edges.append((v, u))
                queue.append(u)
    return SpanningTree(range(R.n), edges)


def bounded_spanning_tree(R: Graph, k: int) -> SpanningTree:
    """
    Spanning tree with maximum degree at most 8k by score-decreasing swaps:
    a vertex u above the bound gives up the edge into the smallest component
    C of T - u, whose endpoint v is rewired to a low-degree neighbour outside C.
    """
    if R.n == 0 or len(R.components()) != 1:
        raise PreconditionViolated("graph must be connected and nonempty",
                                   components=len(R.components()))
    if 2 * k * R.min_degree() < R.n:
        raise PreconditionViolated(
            f"minimum degree {R.min_degree()} below v/(2k) = {R.n / (2 * k):.2f}",
            min_degree=R.min_degree(), v=R.n, k=k)

    bound = 8 * k
    tree = bfs_tree(R)
    initial_score = tree.score()
    while True:
        heavy = [v for v in tree.vertices if tree.degree(v) > bound]
        if not heavy:
            break
        u = heavy[0]
        branches = sorted(((len(reach), v, reach) for v in tree.neighbors(u)
                           for reach in [tree.reachable_without(v, blocked=u)]),
                          key=lambda item: (item[0], item[1]))
        size, v, C = branches[0]
        options = sorted(w for w in R.neighbors(v)
                         if w not in C and w != u and tree.degree(w) < bound)
        if not options:
            raise NoSwapAvailable(f"no rewiring target for {v} (tree degree of {u} is "
                                  f"{tree.degree(u)})", u=u, v=v, component_size=size)
        before = tree.score()
        tree.swap_edge(u, v, options[0])
        tree.swap_count += 1
        tree.score_history.append(tree.score())
        if tree.score_history[-1] >= before or not tree.is_spanning_tree():
            raise NoSwapAvailable(f"swap at {u} did not lower the score", u=u, v=v)

    if tree.swap_count > initial_score:
        raise NoSwapAvailable(f"{tree.swap_count} swaps exceed initial score {initial_score}")
    heavy_count = sum(1 for v in tree.vertices if tree.degree(v) >= bound)
    logger.info(f"🌲 Spanning tree on {R.n} vertices: max degree {tree.max_degree()} "
                f"<= {bound}, {tree.swap_count} swap(s), {heavy_count} vertex(es) at >= {bound}")
    return tree
