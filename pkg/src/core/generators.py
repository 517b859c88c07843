# src/core/generators.py

"""
Instance generators for the structured inputs the pipeline is exercised on:
the extremal disjoint-biclique family, (noisy) blow-ups of templates and
random graphs with a forced minimum degree. All are pure functions of their
arguments; randomness comes from a seeded numpy Generator.
"""

import logging
from itertools import combinations
from typing import List, Sequence, Tuple

import networkx as nx
import numpy as np

from src.core.errors import NotATree, Unbalanced
from src.core.graph import Edge, Graph

logger = logging.getLogger("Extractor.Generators")


def gen_disjoint_biclique(k: int, t: int) -> Graph:
    """k disjoint copies of K_{t,t}: 2kt vertices, kt^2 edges, t-regular."""
    if k < 1 or t < 1:
        raise ValueError(f"k and t must be positive, got k={k}, t={t}")
    edges: List[Edge] = []
    for copy in range(k):
        base = 2 * t * copy
        left = range(base, base + t)
        right = range(base + t, base + 2 * t)
        edges.extend((u, v) for u in left for v in right)
    logger.info(f"🧱 Disjoint bicliques: k={k}, t={t}, n={2 * k * t}")
    return Graph.from_edges(2 * k * t, edges)


def _validate_tree(tree_edges: Sequence[Edge], r: int) -> None:
    tree = nx.Graph()
    tree.add_nodes_from(range(r))
    for i, j in tree_edges:
        if not (0 <= i < r and 0 <= j < r) or i == j:
            raise NotATree(f"edge ({i}, {j}) invalid for {r} parts")
        tree.add_edge(i, j)
    if len(tree_edges) != r - 1 or not nx.is_tree(tree):
        raise NotATree(f"{len(tree_edges)} edges do not form a tree on {r} vertices",
                       edges=len(tree_edges), parts=r)


def gen_template_blowup(template_edges: Sequence[Edge], part_sizes: Sequence[int],
                        noise_prob: float, seed: int) -> Tuple[Graph, List[int]]:
    """
    Blow-up of an arbitrary template: complete bipartite between parts joined
    by a template edge, every other cross pair present with noise_prob.
    Returns the graph and the part label of each vertex.
    """
    if any(size < 1 for size in part_sizes):
        raise Unbalanced(f"part sizes must be positive: {list(part_sizes)}")
    r = len(part_sizes)
    offsets = np.concatenate(([0], np.cumsum(part_sizes))).astype(int)
    n = int(offsets[-1])
    labels = [i for i in range(r) for _ in range(part_sizes[i])]
    ranges = [range(offsets[i], offsets[i + 1]) for i in range(r)]

    template = {tuple(sorted(edge)) for edge in template_edges}
    rng = np.random.default_rng(seed)
    edges: List[Edge] = []
    for i, j in combinations(range(r), 2):
        if (i, j) in template:
            edges.extend((u, v) for u in ranges[i] for v in ranges[j])
        elif noise_prob > 0:
            mask = rng.random((part_sizes[i], part_sizes[j])) < noise_prob
            us, vs = np.nonzero(mask)
            edges.extend(zip((us + offsets[i]).tolist(), (vs + offsets[j]).tolist()))
    return Graph.from_edges(n, edges), labels


def gen_tree_blowup(tree_edges: Sequence[Edge], part_sizes: Sequence[int],
                    noise_prob: float, seed: int) -> Tuple[Graph, List[int]]:
    """Blow-up of a tree with balanced parts (max <= 2 * min)."""
    _validate_tree(tree_edges, len(part_sizes))
    if not part_sizes or max(part_sizes) > 2 * min(part_sizes):
        raise Unbalanced(f"parts {list(part_sizes)} violate max <= 2 * min")
    logger.info(f"🌳 Tree blow-up: r={len(part_sizes)}, n={sum(part_sizes)}, noise={noise_prob}")
    return gen_template_blowup(tree_edges, part_sizes, noise_prob, seed)


def gen_random_min_degree(n: int, dmin: int, seed: int) -> Graph:
    """
    Random graph with minimum degree >= dmin: a G(n, p) core with p = dmin/n,
    then every deficient vertex is joined to uniformly random non-neighbours.
    """
    if not 0 <= dmin <= max(n - 1, 0):
        raise ValueError(f"dmin={dmin} out of range for n={n}")
    rng = np.random.default_rng(seed)
    rows = [set() for _ in range(n)]
    p = dmin / n if n else 0.0
    for u in range(n):
        draws = np.nonzero(rng.random(n - u - 1) < p)[0]
        for offset in draws.tolist():
            v = u + 1 + offset
            rows[u].add(v)
            rows[v].add(u)
    for v in range(n):
        deficit = dmin - len(rows[v])
        if deficit <= 0:
            continue
        candidates = np.array([u for u in range(n) if u != v and u not in rows[v]], dtype=int)
        for u in rng.choice(candidates, size=deficit, replace=False).tolist():
            rows[v].add(u)
            rows[u].add(v)
    return Graph(n, rows)


def random_tree_edges(r: int, seed: int) -> List[Edge]:
    """Uniform random labelled tree on r vertices (Pruefer decoding)."""
    if r < 2:
        return []
    rng = np.random.default_rng(seed)
    prufer = rng.integers(0, r, size=r - 2).tolist()
    tree = nx.from_prufer_sequence(prufer) if prufer else nx.path_graph(2)
    return sorted(tuple(sorted(edge)) for edge in tree.edges())
