# src/core/graph.py

import hashlib
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from src.core.errors import InputFormatError

logger = logging.getLogger("Extractor.Graph")

Edge = Tuple[int, int]


class Graph:
    """
    Simple undirected graph on the dense vertex range 0..n-1.
    Immutable after construction: adjacency is a tuple of frozensets, so a
    Graph can be shared freely between modules and readers.
    """

    __slots__ = ['_adj', '_edge_count']

    def __init__(self, vertex_count: int, adjacency: Sequence[Iterable[int]]):
        if len(adjacency) != vertex_count:
            raise InputFormatError(
                f"adjacency has {len(adjacency)} rows for {vertex_count} vertices")
        adj = tuple(frozenset(row) for row in adjacency)
        degree_sum = 0
        for v, row in enumerate(adj):
            if v in row:
                raise InputFormatError(f"self-loop at vertex {v}")
            for u in row:
                if not 0 <= u < vertex_count or v not in adj[u]:
                    raise InputFormatError(f"adjacency of {v} inconsistent at {u}")
            degree_sum += len(row)
        self._adj = adj
        self._edge_count = degree_sum // 2

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Edge]) -> "Graph":
        rows: List[set] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if u == v:
                raise InputFormatError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InputFormatError(f"edge ({u}, {v}) outside 0..{vertex_count - 1}")
            rows[u].add(v)
            rows[v].add(u)
        return cls(vertex_count, rows)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def e(self) -> int:
        return self._edge_count

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[Edge]:
        """Each edge once, as (u, v) with u < v, in lexicographic order."""
        for u, row in enumerate(self._adj):
            for v in sorted(row):
                if u < v:
                    yield (u, v)

    def min_degree(self) -> int:
        return min((len(row) for row in self._adj), default=0)

    def max_degree(self) -> int:
        return max((len(row) for row in self._adj), default=0)

    def components(self) -> List[List[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        seen = [False] * self.n
        result = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            queue = deque([start])
            comp = []
            while queue:
                v = queue.popleft()
                comp.append(v)
                for u in self._adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        queue.append(u)
            result.append(sorted(comp))
        return result

    def induced(self, vertices: Sequence[int]) -> Tuple["Graph", List[int]]:
        """
        Induced subgraph relabelled to 0..len(vertices)-1.
        Returns the subgraph and the local -> original vertex map.
        """
        original = list(vertices)
        local: Dict[int, int] = {v: i for i, v in enumerate(original)}
        rows = [[local[u] for u in self._adj[v] if u in local] for v in original]
        return Graph(len(original), rows), original

    def adjacency_matrix(self) -> sparse.csr_matrix:
        rows, cols = [], []
        for v, row in enumerate(self._adj):
            rows.extend([v] * len(row))
            cols.extend(row)
        data = np.ones(len(rows), dtype=np.int32)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.e})"


@dataclass(frozen=True, slots=True)
class GraphStats:
    n: int
    e: int
    min_degree: int
    component_sizes: Tuple[int, ...]


def graph_stats(g: Graph) -> GraphStats:
    """Exact n, e, minimum degree and component sizes (ordered by smallest vertex)."""
    return GraphStats(
        n=g.n,
        e=g.e,
        min_degree=g.min_degree(),
        component_sizes=tuple(len(c) for c in g.components()),
    )


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def input_hash(g: Graph) -> str:
    """SHA-256 of the canonical edge-list text of g."""
    digest = hashlib.sha256()
    digest.update(f"{g.n} {g.e}\n".encode("ascii"))
    for u, v in g.edges():
        digest.update(f"{u} {v}\n".encode("ascii"))
    return digest.hexdigest()
