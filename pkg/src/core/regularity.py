# src/core/regularity.py

"""
Densities, epsilon-regularity verdicts, the reduced graph of a partition and
the super-regularization cleaning step.

Regularity is certified only at tiny scale (exhaustive enumeration, at most
Defaults.EXHAUSTIVE_LIMIT vertices per side); elsewhere the search is
one-sided and every witness it emits is re-checked with exact arithmetic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.constants import Defaults, VerdictStatus
from src.core.errors import (BadPartition, CleaningOverflow, EmptyPart, Overlap,
                             TooLargeForExhaustive)
from src.core.graph import Graph

if TYPE_CHECKING:
    from src.core.structure import SpanningTree

logger = logging.getLogger("Extractor.Regularity")

V0_LABEL = -1


def exact(x: float) -> Fraction:
    """Decimal-exact fraction of a configured tolerance (0.4 means 2/5)."""
    return Fraction(str(x))


@dataclass(frozen=True, slots=True)
class RegularityParams:
    eps: float
    d: float
    delta: Optional[float] = None

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", self.d - 2 * self.eps)
        if not (0 < self.eps < self.d <= 1):
            raise ValueError(f"need 0 < eps < d <= 1, got eps={self.eps}, d={self.d}")
        if not (0 < self.delta < self.d):
            raise ValueError(f"need 0 < delta < d, got delta={self.delta}, d={self.d}")


@dataclass(frozen=True, slots=True)
class Exhaustive:
    pass


@dataclass(frozen=True, slots=True)
class HeuristicSearch:
    seed: int
    restarts: int = Defaults.REGULARITY_RESTARTS


RegularityMode = Union[Exhaustive, HeuristicSearch]


@dataclass(frozen=True, slots=True)
class Witness:
    u_sub: Tuple[int, ...]
    w_sub: Tuple[int, ...]
    density: Fraction
    pair_density: Fraction


@dataclass(frozen=True, slots=True)
class RegularityVerdict:
    status: VerdictStatus
    witness: Optional[Witness] = None

    @property
    def is_regular(self) -> bool:
        return self.status in (VerdictStatus.REGULAR_CERTIFIED, VerdictStatus.NO_WITNESS_FOUND)


@dataclass(frozen=True, slots=True)
class PairRecord:
    density: Fraction
    verdict: RegularityVerdict


@dataclass(slots=True)
class RegularDecomposition:
    exceptional_set: List[int]
    clusters: List[List[int]]
    pair_table: Dict[Tuple[int, int], PairRecord] = field(default_factory=dict)
    reduced: Optional[Graph] = None

    @property
    def r(self) -> int:
        return len(self.clusters)

    @property
    def delta_reduced(self) -> int:
        return self.reduced.min_degree() if self.reduced is not None else 0

    def report(self) -> dict:
        """Structured summary: r, |V_0|, densities, verdicts, reduced edges."""
        return {
            "r": self.r,
            "exceptional_size": len(self.exceptional_set),
            "cluster_size": len(self.clusters[0]) if self.clusters else 0,
            "pairs": [
                {"pair": [i, j], "density": float(rec.density), "verdict": rec.verdict.status.value}
                for (i, j), rec in sorted(self.pair_table.items())
            ],
            "reduced_edges": [list(e) for e in self.reduced.edges()] if self.reduced else [],
            "delta_reduced": self.delta_reduced,
        }


# --- densities ---

def _check_sides(U: Sequence[int], W: Sequence[int]) -> None:
    if not U or not W:
        raise EmptyPart(f"pair sides have sizes {len(U)} and {len(W)}")
    if set(U) & set(W):
        raise Overlap(f"pair sides share {len(set(U) & set(W))} vertices")


def edge_count_between(g: Graph, U: Sequence[int], W: Sequence[int]) -> int:
    w_set = frozenset(W)
    return sum(len(g.neighbors(u) & w_set) for u in U)


def pair_density(g: Graph, U: Sequence[int], W: Sequence[int]) -> Fraction:
    """d(U, W) = e(U, W) / (|U||W|), exactly."""
    _check_sides(U, W)
    return Fraction(edge_count_between(g, U, W), len(U) * len(W))


def _block(g: Graph, U: Sequence[int], W: Sequence[int]) -> np.ndarray:
    column = {w: j for j, w in enumerate(W)}
    block = np.zeros((len(U), len(W)), dtype=np.int64)
    for i, u in enumerate(U):
        hits = [column[w] for w in g.neighbors(u) if w in column]
        block[i, hits] = 1
    return block


def _exact_witness(block: np.ndarray, rows: Sequence[int], cols: Sequence[int],
                   U: Sequence[int], W: Sequence[int], d0: Fraction,
                   eps: Fraction) -> Optional[Witness]:
    edges = int(block[np.ix_(list(rows), list(cols))].sum())
    density = Fraction(edges, len(rows) * len(cols))
    if abs(density - d0) > eps:
        return Witness(
            u_sub=tuple(U[i] for i in rows),
            w_sub=tuple(W[j] for j in cols),
            density=density,
            pair_density=d0,
        )
    return None


def _subset_matrix(size: int, min_size: int) -> np.ndarray:
    masks = np.arange(1 << size, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(size)) & 1).astype(np.int64)
    return bits[bits.sum(axis=1) >= min_size]


def _exhaustive(block: np.ndarray, U, W, d0: Fraction, eps: Fraction) -> RegularityVerdict:
    min_u = max(1, math.ceil(float(eps) * len(U) - 1e-12))
    min_w = max(1, math.ceil(float(eps) * len(W) - 1e-12))
    su = _subset_matrix(len(U), min_u)
    sw = _subset_matrix(len(W), min_w)
    sw_sizes = sw.sum(axis=1)
    projected = block @ sw.T                      # |U| x subsets(W)
    slack = float(eps) - 1e-9
    for start in range(0, len(su), 256):
        chunk = su[start:start + 256]
        counts = chunk @ projected                 # chunk x subsets(W)
        sizes = np.outer(chunk.sum(axis=1), sw_sizes)
        deviation = np.abs(counts / sizes - float(d0))
        for a, b in zip(*np.nonzero(deviation > slack)):
            rows = np.nonzero(chunk[a])[0].tolist()
            cols = np.nonzero(sw[b])[0].tolist()
            witness = _exact_witness(block, rows, cols, U, W, d0, eps)
            if witness is not None:
                return RegularityVerdict(VerdictStatus.IRREGULAR_WITNESS, witness)
    return RegularityVerdict(VerdictStatus.REGULAR_CERTIFIED)


def _extremes(scores: np.ndarray, size: int) -> List[List[int]]:
    order = np.argsort(scores, kind="stable")
    return [sorted(order[-size:].tolist()), sorted(order[:size].tolist())]


def _heuristic(block: np.ndarray, U, W, d0: Fraction, eps: Fraction,
               mode: HeuristicSearch) -> RegularityVerdict:
    size_u = max(1, math.ceil(float(eps) * len(U) - 1e-12))
    size_w = max(1, math.ceil(float(eps) * len(W) - 1e-12))
    all_rows = list(range(len(U)))
    all_cols = list(range(len(W)))
    candidates: List[Tuple[List[int], List[int]]] = []

    # Greedy degree deviation: extreme rows, then the extreme columns into them.
    for rows in _extremes(block.sum(axis=1), size_u):
        candidates.append((rows, all_cols))
        for cols in _extremes(block[rows].sum(axis=0), size_w):
            candidates.append((rows, cols))
    for cols in _extremes(block.sum(axis=0), size_w):
        candidates.append((all_rows, cols))
        for rows in _extremes(block[:, cols].sum(axis=1), size_u):
            candidates.append((rows, cols))

    rng = np.random.default_rng(mode.seed)
    for _ in range(mode.restarts):
        rows = sorted(rng.choice(len(U), size=size_u, replace=False).tolist())
        for cols in _extremes(block[rows].sum(axis=0), size_w):
            candidates.append((rows, cols))

    for rows, cols in candidates:
        witness = _exact_witness(block, rows, cols, U, W, d0, eps)
        if witness is not None:
            return RegularityVerdict(VerdictStatus.IRREGULAR_WITNESS, witness)
    return RegularityVerdict(VerdictStatus.NO_WITNESS_FOUND)


def regularity_check(g: Graph, U: Sequence[int], W: Sequence[int], eps: float,
                     mode: RegularityMode) -> RegularityVerdict:
    _check_sides(U, W)
    if isinstance(mode, Exhaustive) and max(len(U), len(W)) > Defaults.EXHAUSTIVE_LIMIT:
        raise TooLargeForExhaustive(
            f"sides {len(U)} x {len(W)} exceed {Defaults.EXHAUSTIVE_LIMIT}",
            sizes=(len(U), len(W)))
    U, W = list(U), list(W)
    d0 = pair_density(g, U, W)
    if d0 in (0, 1):
        return RegularityVerdict(VerdictStatus.REGULAR_CERTIFIED)
    block = _block(g, U, W)
    if isinstance(mode, Exhaustive):
        return _exhaustive(block, U, W, d0, exact(eps))
    return _heuristic(block, U, W, d0, exact(eps), mode)


# --- decomposition ---

def clusters_from_labels(labels: Sequence[int]) -> Tuple[List[int], List[List[int]]]:
    exceptional = [v for v, lab in enumerate(labels) if lab == V0_LABEL]
    count = max(labels, default=V0_LABEL) + 1
    clusters: List[List[int]] = [[] for _ in range(count)]
    for v, lab in enumerate(labels):
        if lab < V0_LABEL:
            raise BadPartition(f"vertex {v} has label {lab}")
        if lab != V0_LABEL:
            clusters[lab].append(v)
    return exceptional, clusters


def build_decomposition(g: Graph, labels: Sequence[int], params: RegularityParams,
                        seed: int = 0,
                        restarts: int = Defaults.REGULARITY_RESTARTS) -> RegularDecomposition:
    if len(labels) != g.n:
        raise BadPartition(f"{len(labels)} labels for {g.n} vertices")
    exceptional, clusters = clusters_from_labels(labels)
    sizes = {len(c) for c in clusters}
    if not clusters or 0 in sizes or len(sizes) != 1:
        raise BadPartition(f"cluster sizes must be equal and positive, got {sorted(sizes)}")
    if len(exceptional) > params.eps * g.n:
        raise BadPartition(f"|V_0| = {len(exceptional)} exceeds eps * n = {params.eps * g.n:.1f}",
                           exceptional=len(exceptional))

    decomposition = RegularDecomposition(exceptional_set=exceptional, clusters=clusters)
    threshold = exact(params.d)
    reduced_edges = []
    for i, j in combinations(range(len(clusters)), 2):
        U, W = clusters[i], clusters[j]
        if max(len(U), len(W)) <= Defaults.EXHAUSTIVE_LIMIT:
            mode: RegularityMode = Exhaustive()
        else:
            mode = HeuristicSearch(seed=seed + i * len(clusters) + j, restarts=restarts)
        density = pair_density(g, U, W)
        if density >= threshold:
            verdict = regularity_check(g, U, W, params.eps, mode)
        else:
            verdict = RegularityVerdict(VerdictStatus.SPARSE_UNTESTED)
        decomposition.pair_table[(i, j)] = PairRecord(density, verdict)
        if density >= threshold and verdict.is_regular:
            reduced_edges.append((i, j))
    decomposition.reduced = Graph.from_edges(len(clusters), reduced_edges)
    logger.info(f"🧮 Reduced graph: r={len(clusters)}, |V_0|={len(exceptional)}, "
                f"edges={len(reduced_edges)}, delta(R)={decomposition.delta_reduced}")
    return decomposition


def outside_degree_violations(g: Graph, decomposition: RegularDecomposition,
                              params: RegularityParams) -> List[int]:
    """
    Vertices with more than (eps + d) n incident edges that do not run inside
    a regular dense pair (edges to V_0, inside clusters, or across non-reduced pairs).
    """
    cluster_of: Dict[int, int] = {}
    for idx, members in enumerate(decomposition.clusters):
        for v in members:
            cluster_of[v] = idx
    reduced = decomposition.reduced
    limit = (params.eps + params.d) * g.n
    violators = []
    for v in range(g.n):
        home = cluster_of.get(v)
        inside = 0
        if home is not None:
            inside = sum(1 for u in g.neighbors(v)
                         if u in cluster_of and reduced.has_edge(home, cluster_of[u]))
        if g.degree(v) - inside > limit:
            violators.append(v)
    return violators


# --- partitioning ---

def profile_classes(g: Graph, seed: int,
                    threshold: float = Defaults.SIMILARITY_THRESHOLD,
                    max_classes: Optional[int] = None) -> List[List[int]]:
    """
    Group vertices by co-degree profile: a class is a seed vertex plus every
    unclassified vertex sharing at least `threshold` of the larger degree as
    common neighbours. Classes are returned in formation order, members sorted.
    """
    adjacency = g.adjacency_matrix()
    degrees = np.asarray(adjacency.sum(axis=1)).ravel()
    rng = np.random.default_rng(seed)
    unclassified = np.ones(g.n, dtype=bool)
    classes: List[List[int]] = []
    while unclassified.any():
        pool = np.nonzero(unclassified)[0]
        if max_classes is not None and len(classes) >= max_classes - 1:
            classes.append(pool.tolist())
            break
        s = int(rng.choice(pool))
        if degrees[s] == 0:
            members = pool[degrees[pool] == 0]
        else:
            codegree = np.asarray((adjacency @ adjacency[s].T).todense()).ravel()
            similarity = codegree[pool] / np.maximum(degrees[pool], degrees[s])
            members = pool[similarity >= threshold]
            members = np.union1d(members, [s])
        unclassified[members] = False
        classes.append(sorted(members.tolist()))
    return classes


def _carve(n: int, classes: Sequence[Sequence[int]], r: int, size: int,
           pool_remainders: bool) -> Tuple[List[int], int]:
    labels = [V0_LABEL] * n
    parts = 0
    pool: List[int] = []
    for members in classes:
        members = list(members)
        while len(members) >= size and parts < r:
            for v in members[:size]:
                labels[v] = parts
            parts += 1
            members = members[size:]
        pool.extend(members)
    mixed = 0
    while pool_remainders and parts < r and len(pool) >= size:
        for v in pool[:size]:
            labels[v] = parts
        parts += 1
        mixed += 1
        pool = pool[size:]
    return labels, mixed


def pure_part_size(classes: Sequence[Sequence[int]], r: int, upper: int) -> int:
    """Largest size <= upper at which the classes alone yield r parts."""
    for size in range(upper, 0, -1):
        if sum(len(c) // size for c in classes) >= r:
            return size
    return 0


def carvings(n: int, classes: Sequence[Sequence[int]], r: int) -> List[Tuple[List[int], int]]:
    """
    Both carvings of r equal parts, class order then vertex order:
      - pure: the largest size at which the classes alone give r parts;
      - pooled: size n // r, class remainders pooled into mixed parts.
    Each entry is (labels with V_0 = -1, number of mixed parts), pure first.
    """
    pure_labels, _ = _carve(n, classes, r, pure_part_size(classes, r, n // r),
                            pool_remainders=False)
    return [(pure_labels, 0), _carve(n, classes, r, n // r, pool_remainders=True)]


def carve_parts(n: int, classes: Sequence[Sequence[int]], r: int) -> Tuple[List[int], int]:
    """The carving leaving fewer vertices in V_0; pure on ties."""
    return min(carvings(n, classes, r), key=lambda c: c[0].count(V0_LABEL))


def heuristic_partition(g: Graph, r: int, seed: int,
                        threshold: float = Defaults.SIMILARITY_THRESHOLD) -> List[int]:
    """Equal-size parts by co-degree profile clustering; remainder in V_0."""
    if not 1 <= r <= g.n:
        raise BadPartition(f"r={r} outside 1..{g.n}")
    classes = profile_classes(g, seed, threshold, max_classes=4 * r + 4)
    labels, _ = carve_parts(g.n, classes, r)
    return labels


def choose_cluster_count(g: Graph, params: RegularityParams, max_clusters: int, seed: int,
                         threshold: float = Defaults.SIMILARITY_THRESHOLD) -> Tuple[int, List[int]]:
    """
    Smallest r >= 2 with a carving that needs no mixed part and keeps
    |V_0| <= eps n; falls back to the r with the fewest mixed parts.
    """
    upper = min(max_clusters, g.n)
    classes = profile_classes(g, seed, threshold, max_classes=4 * upper + 4)
    best: Optional[Tuple[int, int, int, List[int]]] = None
    for r in range(2, upper + 1):
        for labels, mixed in carvings(g.n, classes, r):
            leftover = labels.count(V0_LABEL)
            if mixed == 0 and leftover <= params.eps * g.n:
                logger.info(f"🧩 Partition: r={r}, classes={len(classes)}, |V_0|={leftover}")
                return r, labels
            if best is None or (mixed, leftover) < (best[0], best[1]):
                best = (mixed, leftover, r, labels)
    if best is None:
        raise BadPartition(f"graph with {g.n} vertices cannot be split into two or more parts")
    logger.warning(f"⚠️ No clean partition up to r={upper}; using r={best[2]} "
                   f"with {best[0]} mixed part(s)")
    return best[2], best[3]


# --- cleaning ---

def superregularize(g: Graph, clusters: Dict[int, List[int]], tree: "SpanningTree",
                    params: RegularityParams, k: int) -> Dict[int, List[int]]:
    """
    Remove from every cluster the vertices with fewer than (d - eps)|V_j|
    neighbours in some tree-neighbour cluster V_j. At most 8(k+1) eps |V_i|
    removals per cluster are allowed.
    """
    minimum = {i: (params.d - params.eps) * len(members) for i, members in clusters.items()}
    member_sets = {i: frozenset(members) for i, members in clusters.items()}
    cleaned: Dict[int, List[int]] = {}
    for i, members in clusters.items():
        tree_neighbours = sorted(tree.neighbors(i))
        kept = [v for v in members
                if all(len(g.neighbors(v) & member_sets[j]) >= minimum[j] for j in tree_neighbours)]
        removed = len(members) - len(kept)
        allowance = 8 * (k + 1) * params.eps * len(members)
        if removed > allowance or 2 * len(kept) < len(members):
            raise CleaningOverflow(
                f"cluster {i} needs {removed} removals, allowance {allowance:.1f}",
                cluster=i, removed=removed, allowance=allowance)
        cleaned[i] = kept
    sizes = [len(v) for v in cleaned.values()]
    if sizes and max(sizes) > 2 * min(sizes):
        raise CleaningOverflow(f"cleaned clusters unbalanced: {min(sizes)}..{max(sizes)}",
                               sizes=sizes)
    removed_total = sum(len(clusters[i]) - len(cleaned[i]) for i in clusters)
    logger.info(f"🧹 Super-regularized {len(clusters)} clusters, removed {removed_total} vertices")
    return cleaned
