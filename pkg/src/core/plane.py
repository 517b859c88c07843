# src/core/plane.py

"""
Plane-graph machinery: planarity decision with embedding extraction,
rotation systems, face traversal and the quadrangulation / triangulation
predicates. A rotation system whose face walks satisfy Euler's formula on
every component is itself a certificate of planarity, so nothing downstream
trusts an embedding it has not traced.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

import networkx as nx

from src.core.constants import FaceClass
from src.core.errors import EulerViolation, InputFormatError
from src.core.graph import Edge, Graph

logger = logging.getLogger("Extractor.Plane")


class RotationSystem:
    """
    Cyclic neighbour order around every vertex. Vertex ids are arbitrary
    integers so a component of a certificate keeps the ids of the input graph.
    """

    __slots__ = ['_rotation', '_edge_count']

    def __init__(self, rotation: Mapping[int, Sequence[int]]):
        frozen: Dict[int, Tuple[int, ...]] = {v: tuple(nbrs) for v, nbrs in rotation.items()}
        degree_sum = 0
        for v, nbrs in frozen.items():
            if len(set(nbrs)) != len(nbrs):
                raise InputFormatError(f"rotation of {v} repeats a neighbour")
            for u in nbrs:
                if u == v or u not in frozen or v not in frozen[u]:
                    raise InputFormatError(f"rotation of {v} lists {u} without the reverse entry")
            degree_sum += len(nbrs)
        self._rotation = frozen
        self._edge_count = degree_sum // 2

    @classmethod
    def from_rows(cls, vertices: Sequence[int], rows: Sequence[Sequence[int]]) -> "RotationSystem":
        """Text-format rows: row i is the cyclic neighbour list of vertices[i]."""
        if len(vertices) != len(rows):
            raise InputFormatError(f"{len(rows)} rotation rows for {len(vertices)} vertices")
        return cls(dict(zip(vertices, rows)))

    def to_rows(self, vertices: Sequence[int]) -> List[List[int]]:
        return [list(self._rotation[v]) for v in vertices]

    def relabel(self, mapping: Mapping[int, int]) -> "RotationSystem":
        return RotationSystem({mapping[v]: [mapping[u] for u in nbrs] for v, nbrs in self._rotation.items()})

    @property
    def vertices(self) -> List[int]:
        return sorted(self._rotation)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def rotation(self, v: int) -> Tuple[int, ...]:
        return self._rotation[v]

    def degree(self, v: int) -> int:
        return len(self._rotation[v])

    def max_degree(self) -> int:
        return max((len(r) for r in self._rotation.values()), default=0)

    def edges(self) -> List[Edge]:
        return sorted((u, v) for u, nbrs in self._rotation.items() for v in nbrs if u < v)

    def components(self) -> List[List[int]]:
        seen = set()
        result = []
        for start in sorted(self._rotation):
            if start in seen:
                continue
            seen.add(start)
            queue = deque([start])
            comp = []
            while queue:
                v = queue.popleft()
                comp.append(v)
                for u in self._rotation[v]:
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
            result.append(sorted(comp))
        return result

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RotationSystem) and self._rotation == other._rotation

    def __hash__(self) -> int:
        return hash(frozenset(self._rotation.items()))

    def __repr__(self) -> str:
        return f"RotationSystem(n={len(self._rotation)}, e={self._edge_count})"


@dataclass(frozen=True, slots=True)
class FaceSet:
    faces: Tuple[Tuple[int, ...], ...]
    genus: int
    component_euler: Tuple[int, ...]

    def lengths(self) -> List[int]:
        return sorted(len(face) for face in self.faces)


@dataclass(frozen=True, slots=True)
class NonplanarWitness:
    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    kind: str


def _kuratowski_kind(witness: nx.Graph) -> str:
    branch = [v for v, d in witness.degree() if d > 2]
    if len(branch) == 5:
        return "K5-subdivision"
    if len(branch) == 6:
        return "K33-subdivision"
    return "unclassified"


def planarity_embed(g: Union[Graph, nx.Graph]) -> Union[RotationSystem, NonplanarWitness]:
    """Rotation system of a planar embedding, or a Kuratowski subdivision."""
    nxg = g.to_networkx() if isinstance(g, Graph) else g
    is_planar, certificate = nx.check_planarity(nxg, counterexample=True)
    if not is_planar:
        edges = tuple(sorted(tuple(sorted(e)) for e in certificate.edges()))
        return NonplanarWitness(
            vertices=tuple(sorted(certificate.nodes())),
            edges=edges,
            kind=_kuratowski_kind(certificate),
        )
    return RotationSystem({v: list(certificate.neighbors_cw_order(v)) for v in nxg.nodes()})


def is_planar(g: Union[Graph, nx.Graph]) -> bool:
    return isinstance(planarity_embed(g), RotationSystem)


def trace_faces(rs: RotationSystem, planar_claim: bool = True) -> FaceSet:
    """
    Face walks by next-edge traversal: dart (u -> v) is followed by (v -> w)
    where w comes after u in the cyclic order at v. Every dart lies on exactly
    one walk. With planar_claim, every component must satisfy n - e + f = 2.
    """
    position: Dict[int, Dict[int, int]] = {
        v: {u: i for i, u in enumerate(rs.rotation(v))} for v in rs.vertices
    }
    visited = set()
    faces: List[Tuple[int, ...]] = []
    face_owner: List[int] = []
    for u in rs.vertices:
        for v in rs.rotation(u):
            if (u, v) in visited:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in visited:
                visited.add((a, b))
                walk.append(a)
                rot_b = rs.rotation(b)
                c = rot_b[(position[b][a] + 1) % len(rot_b)]
                a, b = b, c
            faces.append(tuple(walk))
            face_owner.append(u)

    component_of: Dict[int, int] = {}
    components = rs.components()
    for idx, comp in enumerate(components):
        for v in comp:
            component_of[v] = idx
    face_count = [0] * len(components)
    for owner in face_owner:
        face_count[component_of[owner]] += 1

    euler = []
    genus = 0
    for idx, comp in enumerate(components):
        e_c = sum(rs.degree(v) for v in comp) // 2
        f_c = face_count[idx] if e_c else 1
        chi = len(comp) - e_c + f_c
        euler.append(chi)
        genus += (2 - chi) // 2
    result = FaceSet(faces=tuple(faces), genus=genus, component_euler=tuple(euler))
    if planar_claim and any(chi != 2 for chi in euler):
        bad = [i for i, chi in enumerate(euler) if chi != 2]
        raise EulerViolation(f"{len(bad)} component(s) break n - e + f = 2",
                             components=bad, euler=euler)
    return result


def classify(rs: RotationSystem) -> FaceClass:
    lengths = {len(face) for face in trace_faces(rs).faces}
    if lengths == {4}:
        return FaceClass.QUADRANGULATION
    if lengths == {3}:
        return FaceClass.TRIANGULATION
    return FaceClass.OTHER


def rotation_from_edges(edges: Iterable[Edge]) -> RotationSystem:
    """Planar rotation system for an edge set known to be planar."""
    nxg = nx.Graph()
    nxg.add_edges_from(edges)
    embedded = planarity_embed(nxg)
    if isinstance(embedded, NonplanarWitness):
        raise EulerViolation(f"edge set is not planar ({embedded.kind})")
    return embedded
