# src/core/embed.py

"""
Vertex orderings, the arrangeability evaluator, the randomized candidate-set
embedder that stands in for the blow-up lemma, and the stacked-octahedra
triangulations used when the reduced graph has a small component.

Every embedding leaving this module has been verified edge by edge.
"""

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from src.core.constants import Defaults
from src.core.errors import BadOrder, EmbedFailed, PreconditionViolated
from src.core.graph import Graph
from src.core.plane import RotationSystem, rotation_from_edges

logger = logging.getLogger("Extractor.Embed")


@dataclass(frozen=True, slots=True)
class Ordering:
    vertices: Tuple[int, ...]

    def validate(self, n: int) -> None:
        if sorted(self.vertices) != list(range(n)):
            raise ValueError(f"ordering of {len(self.vertices)} entries is not a permutation of 0..{n - 1}")

    def position(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.vertices)}


@dataclass(slots=True)
class EmbeddingMap:
    mapping: Dict[int, int]
    part_respecting: bool
    attempts: int = 1
    backtracks: int = 0
    diagnostics: List[str] = field(default_factory=list)


# --- arrangeability ---

def arrangeability_at(H: Graph, order: Ordering, exclude_self: bool = False) -> int:
    """
    max over i of |N(N(x_i) ∩ {x_{i+1}..x_n}) ∩ {x_1..x_i}|. The literal reading
    counts x_i itself once it has a later neighbour; exclude_self drops it.
    """
    order.validate(H.n)
    position = order.position()
    best = 0
    for i, x in enumerate(order.vertices):
        later = {y for y in H.neighbors(x) if position[y] > i}
        if not later:
            continue
        back = set()
        for y in later:
            back.update(z for z in H.neighbors(y) if position[z] <= i and z not in later)
        if exclude_self:
            back.discard(x)
        best = max(best, len(back))
    return best


def ordering_heuristic(H: Graph) -> Ordering:
    """Smallest-last ordering: repeatedly strip a minimum-degree vertex (lowest index), reversed."""
    degree = [H.degree(v) for v in range(H.n)]
    heap = [(degree[v], v) for v in range(H.n)]
    heapq.heapify(heap)
    removed = [False] * H.n
    stripped: List[int] = []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != degree[v]:
            continue
        removed[v] = True
        stripped.append(v)
        for u in H.neighbors(v):
            if not removed[u]:
                degree[u] -= 1
                heapq.heappush(heap, (degree[u], u))
    return Ordering(tuple(reversed(stripped)))


def bag_last_ordering(H: Graph, bag_members: Sequence[int]) -> Ordering:
    """Smallest-last order with bag members moved to the end."""
    deferred = set(bag_members)
    base = ordering_heuristic(H).vertices
    return Ordering(tuple([v for v in base if v not in deferred] + [v for v in base if v in deferred]))


# --- candidate-set embedding ---

def verify_embedding(H: Graph, G: Graph, mapping: Mapping[int, int],
                     part_of: Mapping[int, int], clusters: Mapping[int, Sequence[int]]) -> List[str]:
    """Injectivity, adjacency preservation and part respect; returns violations."""
    problems = []
    if len(mapping) != H.n:
        problems.append(f"{H.n - len(mapping)} guest vertex(es) unmapped")
    if len(set(mapping.values())) != len(mapping):
        problems.append("mapping is not injective")
    cluster_sets = {i: frozenset(c) for i, c in clusters.items()}
    for x, v in mapping.items():
        if v not in cluster_sets[part_of[x]]:
            problems.append(f"guest {x} mapped outside its cluster")
            break
    for x, y in H.edges():
        if x in mapping and y in mapping and not G.has_edge(mapping[x], mapping[y]):
            problems.append(f"guest edge ({x}, {y}) not preserved")
            break
    return problems


class _Placement:
    """One randomized attempt: candidate sets from already-placed neighbours."""

    __slots__ = ['H', 'G', 'part_of', 'clusters', 'rng', 'phi', 'used', 'placed_at']

    def __init__(self, H: Graph, G: Graph, part_of: Mapping[int, int],
                 clusters: Mapping[int, frozenset], rng: np.random.Generator):
        self.H, self.G = H, G
        self.part_of = part_of
        self.clusters = clusters
        self.rng = rng
        self.phi: Dict[int, int] = {}
        self.used: Set[int] = set()
        self.placed_at: Dict[int, int] = {}

    def candidates(self, x: int) -> List[int]:
        images = [self.phi[y] for y in self.H.neighbors(x) if y in self.phi]
        pool = set(self.clusters[self.part_of[x]])
        for v in sorted(images, key=self.G.degree):
            pool &= self.G.neighbors(v)
        pool -= self.used
        return sorted(pool)

    def place(self, x: int, v: int) -> None:
        self.phi[x] = v
        self.used.add(v)
        self.placed_at[x] = len(self.placed_at)

    def move(self, y: int, v: int) -> None:
        self.used.discard(self.phi[y])
        self.phi[y] = v
        self.used.add(v)

    def backtrack(self, x: int) -> bool:
        """Re-place the most recently placed neighbour of x so that x gets a candidate."""
        placed = [y for y in self.H.neighbors(x) if y in self.phi]
        if not placed:
            return False
        y = max(placed, key=self.placed_at.__getitem__)
        old = self.phi[y]
        options = self.candidates(y)
        self.used.discard(old)
        for index in self.rng.permutation(len(options)).tolist():
            self.move(y, options[index])
            if self.candidates(x):
                return True
        self.move(y, old)
        return False

    def finish_by_matching(self, deferred: Sequence[int]) -> bool:
        """Place an independent set at once through a maximum bipartite matching."""
        if not deferred:
            return True
        matcher = nx.Graph()
        guests = [("guest", x) for x in deferred]
        matcher.add_nodes_from(guests)
        for x in deferred:
            matcher.add_edges_from((("guest", x), ("host", v)) for v in self.candidates(x))
        matching = nx.bipartite.hopcroft_karp_matching(matcher, top_nodes=guests)
        if any(node not in matching for node in guests):
            return False
        for x in deferred:
            self.place(x, matching[("guest", x)][1])
        return True


def _independent(H: Graph, vertices: Sequence[int]) -> List[int]:
    kept: List[int] = []
    chosen: Set[int] = set()
    for x in vertices:
        if not (H.neighbors(x) & chosen):
            kept.append(x)
            chosen.add(x)
    return kept


def candidate_embed(H: Graph, part_of: Mapping[int, int], G: Graph,
                    clusters: Mapping[int, Sequence[int]], order: Ordering, seed: int,
                    restarts: int, deferred: Sequence[int] = ()) -> EmbeddingMap:
    """
    Place guest vertices in order, each on a random unused host vertex of its
    cluster adjacent to the images of all placed neighbours. One backtrack per
    attempt, then a restart from a fresh seeded stream.

    Deferred vertices (thinned to an independent set) skip the greedy pass and
    are matched to the leftover host vertices in one step at the end.
    """
    order.validate(H.n)
    cluster_sets = {i: frozenset(members) for i, members in clusters.items()}
    late = _independent(H, deferred)
    late_set = set(late)
    stuck_at: List[int] = []
    for attempt in range(restarts):
        rng = np.random.default_rng([seed, attempt])
        state = _Placement(H, G, part_of, cluster_sets, rng)
        backtracks = 0
        failed = False
        for x in order.vertices:
            if x in late_set:
                continue
            options = state.candidates(x)
            if not options and backtracks == 0:
                backtracks = 1
                if state.backtrack(x):
                    options = state.candidates(x)
            if not options:
                stuck_at.append(len(state.phi))
                failed = True
                break
            state.place(x, options[int(rng.integers(len(options)))])
        if failed:
            continue
        if not state.finish_by_matching(late):
            stuck_at.append(len(state.phi))
            continue
        problems = verify_embedding(H, G, state.phi, part_of, clusters)
        if problems:
            raise EmbedFailed("; ".join(problems), attempt=attempt)
        return EmbeddingMap(mapping=state.phi, part_respecting=True,
                            attempts=attempt + 1, backtracks=backtracks)
    raise EmbedFailed(f"no embedding of {H.n} vertices after {restarts} restart(s)",
                      restarts=restarts, placed_before_failure=stuck_at)


def greedy_blowup_embed(H: Graph, h_parts: Mapping[int, Sequence[int]], G: Graph,
                        clusters: Mapping[int, Sequence[int]], order: Ordering, seed: int,
                        restarts: int = Defaults.EMBED_RESTARTS,
                        waive_degree_check: bool = False, deferred: Sequence[int] = ()) -> EmbeddingMap:
    """Part-respecting embedding of H into G with phi(X_i) = V'_i."""
    if sorted(h_parts) != sorted(clusters):
        raise PreconditionViolated("guest parts and host clusters carry different indices")
    for i, members in h_parts.items():
        if len(members) != len(clusters[i]):
            raise PreconditionViolated(f"part {i}: |X_i|={len(members)} != |V'_i|={len(clusters[i])}",
                                       part=i)
    diagnostics = []
    n = H.n
    limit = math.sqrt(n) / math.log(n) if n > 1 else 0.0
    if H.max_degree() > limit:
        message = f"max degree {H.max_degree()} exceeds sqrt(n)/ln(n) = {limit:.2f}"
        if not waive_degree_check:
            raise PreconditionViolated(message, max_degree=H.max_degree(), n=n)
        diagnostics.append(message)
        logger.warning(f"⚠️ Blow-up embedding: {message} (waived)")
    part_of = {x: i for i, members in h_parts.items() for x in members}
    result = candidate_embed(H, part_of, G, clusters, order, seed, restarts, deferred)
    result.diagnostics.extend(diagnostics)
    logger.info(f"🧬 Embedded {n} vertices into {len(clusters)} clusters "
                f"(attempt {result.attempts}, {result.backtracks} backtrack(s))")
    return result


# --- tripartite triangulations ---

@dataclass(frozen=True, slots=True)
class TripartiteTriangulation:
    rotation: RotationSystem
    coloring: Dict[int, int]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def order(self) -> int:
        return len(self.coloring)

    def color_classes(self) -> Dict[int, List[int]]:
        classes: Dict[int, List[int]] = {0: [], 1: [], 2: []}
        for v in sorted(self.coloring):
            classes[self.coloring[v]].append(v)
        return classes


def gen_tripartite_triangulation(s: int) -> TripartiteTriangulation:
    """
    Chain of octahedra glued on shared triangles: every new octahedron adds the
    antipodes of the last triangle, each antipode taking its partner's colour.
    """
    if s < 6 or s % 3:
        raise BadOrder(f"order {s} must be >= 6 and divisible by 3", s=s)
    coloring = {v: v // 2 for v in range(6)}
    antipode = {0: 1, 2: 3, 4: 5}
    edges = {(u, v) for u in range(6) for v in range(u + 1, 6)
             if antipode.get(u) != v}
    triangle = (1, 3, 5)
    nxt = 6
    while nxt < s:
        new = (nxt, nxt + 1, nxt + 2)
        for old, fresh in zip(triangle, new):
            coloring[fresh] = coloring[old]
        for i in range(3):
            for j in range(3):
                if i != j:
                    edges.add(tuple(sorted((new[i], triangle[j]))))
            for j in range(i + 1, 3):
                edges.add((new[i], new[j]))
        triangle = new
        nxt += 3
    ordered = tuple(sorted(edges))
    return TripartiteTriangulation(rotation=rotation_from_edges(ordered), coloring=coloring,
                                   edges=ordered)


def embed_tripartite(G: Graph, U: Sequence[int], V: Sequence[int], W: Sequence[int],
                     T3: TripartiteTriangulation, seed: int,
                     restarts: int = Defaults.EMBED_RESTARTS) -> EmbeddingMap:
    """Colour class c of T3 goes into the c-th of (U, V, W)."""
    clusters = {0: list(U), 1: list(V), 2: list(W)}
    for c, members in T3.color_classes().items():
        if len(members) > len(clusters[c]):
            raise PreconditionViolated(f"colour class {c} ({len(members)}) exceeds its cluster "
                                       f"({len(clusters[c])})", color=c)
    H = Graph.from_edges(T3.order, T3.edges)
    result = candidate_embed(H, T3.coloring, G, clusters, ordering_heuristic(H), seed, restarts)
    logger.info(f"🔺 Embedded a {T3.order}-vertex tripartite triangulation "
                f"(attempt {result.attempts})")
    return result
