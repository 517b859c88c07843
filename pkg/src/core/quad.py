# src/core/quad.py

"""
Spanning quadrangulations of tree blow-ups, bag bookkeeping and leftover
insertion.

Conventions shared by every routine here:
  - A face is stored as a dart cycle (c0, c1, c2, c3) with c0 and c2 of
    degree 2 when the face is registered; a group Z inserted into it is
    joined to c0 and c2 only.
  - A Bag (anchors (a0, a1), members m1..mk) lists its members contiguously
    in the rotation of a0 and in reverse order in the rotation of a1.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from src.core.errors import (BadPermutation, NotABag, OutOfHostPairs, PairingImpossible,
                             PreconditionViolated, UnassignableVertex, Unbalanced)
from src.core.graph import Edge, Graph
from src.core.plane import RotationSystem
from src.core.structure import SpanningTree

logger = logging.getLogger("Extractor.Quad")

Face = Tuple[int, int, int, int]


def icbrt(n: int) -> int:
    """Largest integer c with c**3 <= n."""
    if n < 0:
        raise ValueError(f"cube root of negative {n}")
    c = int(round(n ** (1.0 / 3.0)))
    while c ** 3 > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


class PlaneGraph:
    """Mutable rotation builder; freeze() hands out an immutable RotationSystem."""

    __slots__ = ['rot']

    def __init__(self, rot: Optional[Dict[int, List[int]]] = None):
        self.rot: Dict[int, List[int]] = rot if rot is not None else {}

    def add_double_star(self, x1: int, x2: int, members: Sequence[int]) -> List[Face]:
        """K_{2,m} on anchors x1, x2; returns the faces between consecutive members."""
        self.rot[x1] = list(members)
        self.rot[x2] = list(reversed(members))
        for w in members:
            self.rot[w] = [x1, x2]
        return [(members[j + 1], x2, members[j], x1) for j in range(len(members) - 1)]

    def insert_into_face(self, face: Face, group: Sequence[int]) -> List[Face]:
        """
        Join every vertex of group to c0 and c2 inside face (c0, c1, c2, c3).
        Returns the new faces (z_{i+1}, c2, z_i, c0) between consecutive group members.
        """
        c0, c1, c2, c3 = face
        at_c0 = self.rot[c0]
        at_c2 = self.rot[c2]
        i0 = at_c0.index(c3) + 1
        at_c0[i0:i0] = list(group)
        i2 = at_c2.index(c1) + 1
        at_c2[i2:i2] = list(reversed(group))
        for z in group:
            self.rot[z] = [c0, c2]
        return [(group[i + 1], c2, group[i], c0) for i in range(len(group) - 1)]

    def rewrite_block(self, a0: int, a1: int, old: Sequence[int], new: Sequence[int]) -> None:
        """Replace the contiguous run old (reversed at a1) by new in both anchor rotations."""
        for anchor, old_run, new_run in ((a0, list(old), list(new)),
                                         (a1, list(reversed(old)), list(reversed(new)))):
            rotation = self.rot[anchor]
            start = rotation.index(old_run[0])
            for j, v in enumerate(new_run):
                rotation[(start + j) % len(rotation)] = v

    @property
    def vertices(self) -> List[int]:
        return sorted(self.rot)

    def vertex_count(self) -> int:
        return len(self.rot)

    def edge_count(self) -> int:
        return sum(len(r) for r in self.rot.values()) // 2

    def degree(self, v: int) -> int:
        return len(self.rot[v])

    def max_degree(self) -> int:
        return max((len(r) for r in self.rot.values()), default=0)

    def edges(self) -> List[Edge]:
        return sorted((u, v) for u, nbrs in self.rot.items() for v in nbrs if u < v)

    def freeze(self) -> RotationSystem:
        return RotationSystem(self.rot)

    def relabel(self, mapping: Mapping[int, int]) -> "PlaneGraph":
        return PlaneGraph({mapping[v]: [mapping[u] for u in nbrs] for v, nbrs in self.rot.items()})


@dataclass(slots=True)
class Bag:
    anchors: Tuple[int, int]
    members: List[int]

    def relabel(self, mapping: Mapping[int, int]) -> "Bag":
        return Bag(anchors=(mapping[self.anchors[0]], mapping[self.anchors[1]]),
                   members=[mapping[m] for m in self.members])


@dataclass(slots=True)
class QuadResult:
    plane: PlaneGraph
    bags: List[Bag]
    chunk_plan: Dict[int, List[List[int]]]
    uncovered_count: int
    chunk_cap: int
    small_bags: int = 0
    diagnostics: List[str] = field(default_factory=list)
    insertions: List[Tuple[int, int, int]] = field(default_factory=list)

    def relabel(self, mapping: Mapping[int, int]) -> "QuadResult":
        return QuadResult(
            plane=self.plane.relabel(mapping),
            bags=[b.relabel(mapping) for b in self.bags],
            chunk_plan={i: [[mapping[v] for v in chunk] for chunk in chunks]
                        for i, chunks in self.chunk_plan.items()},
            uncovered_count=self.uncovered_count,
            chunk_cap=self.chunk_cap,
            small_bags=self.small_bags,
            diagnostics=list(self.diagnostics),
            insertions=[(mapping.get(v, v), mapping[a], mapping[b]) for v, a, b in self.insertions],
        )


@dataclass(slots=True)
class BlowupInstance:
    """
    Idealized blow-up: parts joined completely along tree edges, never
    materialized. host, when given, is checked edge-by-edge against the output.
    """
    parts: Dict[int, List[int]]
    tree: SpanningTree
    host: Optional[Graph] = None

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts.values())


@dataclass(slots=True)
class InsertionPlan:
    leftovers: List[int]
    bags: List[Bag]
    assignment: Dict[int, List[int]]
    good_threshold: int
    capacity: int


@dataclass(slots=True)
class _Group:
    anchors: Tuple[int, int]
    members: List[int]
    used_pairs: List[bool]


# --- construction ---

def chunk_part(vertices: Sequence[int], cap: int) -> List[List[int]]:
    """Minimum number of chunks of size <= cap, sizes as equal as possible."""
    count = math.ceil(len(vertices) / cap)
    base, extra = divmod(len(vertices), count)
    chunks, start = [], 0
    for j in range(count):
        size = base + (1 if j < extra else 0)
        chunks.append(list(vertices[start:start + size]))
        start += size
    return chunks


class _Builder:
    """One quadrangulation under construction: plane, FIFO pair faces per part, groups."""

    __slots__ = ['plane', 'pair_faces', 'groups', 'part_of']

    def __init__(self, parts: Mapping[int, Sequence[int]]):
        self.plane = PlaneGraph()
        self.pair_faces: Dict[int, Deque[Tuple[int, int, Face]]] = {i: deque() for i in parts}
        self.groups: List[_Group] = []
        self.part_of = {v: i for i, members in parts.items() for v in members}

    def _register(self, group: _Group, faces: List[Face]) -> None:
        index = len(self.groups)
        self.groups.append(group)
        part = self.part_of[group.members[0]]
        # Disjoint consecutive pairs (z1, z2), (z3, z4), ...
        for pair_index in range(0, len(faces), 2):
            self.pair_faces[part].append((index, pair_index // 2, faces[pair_index]))

    def seed(self, x1: int, x2: int, members: List[int]) -> None:
        faces = self.plane.add_double_star(x1, x2, members)
        group = _Group((x1, x2), list(members), [False] * (len(members) // 2))
        self._register(group, faces)

    def insert_chunk(self, chunk: List[int], host_part: int) -> None:
        if not chunk:
            return
        queue = self.pair_faces[host_part]
        if not queue:
            raise OutOfHostPairs(
                f"part {host_part} has no free degree-2 pair for a chunk of {len(chunk)}",
                part=host_part, chunk=len(chunk))
        group_index, pair_index, face = queue.popleft()
        self.groups[group_index].used_pairs[pair_index] = True
        faces = self.plane.insert_into_face(face, chunk)
        self._register(_Group((face[0], face[2]), list(chunk), [False] * (len(chunk) // 2)), faces)

    def extract_bags(self, min_order: float) -> Tuple[List[Bag], int]:
        """Gather the degree-2 members of every group into one contiguous bag."""
        bags, small = [], 0
        for group in self.groups:
            singles: List[int] = []
            used: List[int] = []
            for j, z in enumerate(group.members):
                pair = j // 2
                if pair < len(group.used_pairs) and group.used_pairs[pair]:
                    used.append(z)
                else:
                    singles.append(z)
            self.plane.rewrite_block(group.anchors[0], group.anchors[1],
                                     group.members, singles + used)
            group.members = singles + used
            if not singles:
                continue
            if len(singles) < min_order:
                small += 1
                continue
            bags.append(Bag(anchors=group.anchors, members=singles))
        return bags, small


def build_quadrangulation(blowup: BlowupInstance, waive_size_check: bool = False) -> QuadResult:
    parts = {i: sorted(members) for i, members in blowup.parts.items()}
    tree = blowup.tree
    r = len(parts)
    n = blowup.n
    if r < 2 or sorted(parts) != tree.vertices or not tree.is_spanning_tree():
        raise PreconditionViolated(f"tree must span the {r} parts with r >= 2", parts=r)
    sizes = [len(p) for p in parts.values()]
    if min(sizes) < 2 or max(sizes) > 2 * min(sizes):
        raise Unbalanced(f"part sizes {min(sizes)}..{max(sizes)} violate 2 <= |V_i| <= 2|V_j|",
                         sizes=sizes)

    diagnostics: List[str] = []
    if n < (16 * r) ** 3:
        message = f"n={n} below (16r)^3={(16 * r) ** 3}"
        if not waive_size_check:
            raise PreconditionViolated(message, n=n, r=r)
        diagnostics.append(message)
    cap = icbrt(n)
    if cap < 2:
        raise PreconditionViolated(f"chunk cap {cap} too small for n={n}", n=n)

    chunk_plan = {i: chunk_part(members, cap) for i, members in parts.items()}
    order = tree.bfs_order(min(parts))
    root = order[0][0]
    first_child = order[1][0]

    builder = _Builder(parts)
    a_chunks = chunk_plan[root]
    b_chunks = chunk_plan[first_child]
    x1, x2 = a_chunks[0][0], a_chunks[0][1]
    builder.seed(x1, x2, b_chunks[0])
    builder.insert_chunk(a_chunks[0][2:], first_child)
    for j in range(1, max(len(a_chunks), len(b_chunks))):
        if j < len(a_chunks):
            builder.insert_chunk(a_chunks[j], first_child)
        if j < len(b_chunks):
            builder.insert_chunk(b_chunks[j], root)
    for part, parent in order[2:]:
        for chunk in chunk_plan[part]:
            builder.insert_chunk(chunk, parent)

    bags, small = builder.extract_bags(cap / 2)
    covered = sum(len(b.members) for b in bags)
    result = QuadResult(plane=builder.plane, bags=bags, chunk_plan=chunk_plan,
                        uncovered_count=n - covered, chunk_cap=cap, small_bags=small,
                        diagnostics=diagnostics)
    _check_construction_invariants(result, n, blowup.host, enforce=not waive_size_check)
    logger.info(f"🔷 Quadrangulation: n={n}, e={result.plane.edge_count()}, "
                f"max degree {result.plane.max_degree()} (cap {cap}), {len(bags)} bags, "
                f"{small} small, {result.uncovered_count} uncovered")
    return result


def _check_construction_invariants(q: QuadResult, n: int, host: Optional[Graph], enforce: bool) -> None:
    cap = q.chunk_cap
    violations = []
    if q.plane.edge_count() != 2 * n - 4:
        violations.append(f"edge count {q.plane.edge_count()} != 2n-4 = {2 * n - 4}")
    if q.plane.max_degree() > cap + 2:
        violations.append(f"max degree {q.plane.max_degree()} > {cap + 2}")
    if q.uncovered_count > 9 * n ** (2 / 3):
        violations.append(f"uncovered {q.uncovered_count} > 9 n^(2/3) = {9 * n ** (2 / 3):.0f}")
    if any(not cap / 2 <= len(b.members) <= cap for b in q.bags):
        violations.append("bag order outside [c/2, c]")
    if host is not None and any(not host.has_edge(u, v) for u, v in q.plane.edges()):
        violations.append("quadrangulation edge missing from host")
    thin = [len(c) for chunks in q.chunk_plan.values() for c in chunks if len(c) < 0.9 * cap]
    if thin:
        q.diagnostics.append(f"{len(thin)} chunk(s) below 9/10 n^(1/3) (smallest {min(thin)})")
    if violations and enforce:
        raise PreconditionViolated("; ".join(violations), violations=violations)
    q.diagnostics.extend(violations)
    for message in violations:
        logger.warning(f"⚠️ Quadrangulation invariant: {message}")


# --- bags ---

def bag_defect(rot: Mapping[int, Sequence[int]], bag: Bag) -> Optional[str]:
    """None when anchors and members form a contiguous K_{2,k} block of rot."""
    a0, a1 = bag.anchors
    members = bag.members
    if not members or a0 == a1 or a0 not in rot or a1 not in rot:
        return f"bag with anchors {bag.anchors} is malformed"
    if len(set(members)) != len(members) or {a0, a1} & set(members):
        return f"bag with anchors {bag.anchors} repeats a vertex"
    for m in members:
        if m not in rot or len(rot[m]) != 2 or set(rot[m]) != {a0, a1}:
            return f"member {m} is not a degree-2 vertex on anchors {bag.anchors}"
    for anchor, run in ((a0, members), (a1, list(reversed(members)))):
        rotation = list(rot[anchor])
        start = rotation.index(run[0])
        if any(rotation[(start + j) % len(rotation)] != v for j, v in enumerate(run)):
            return f"members not contiguous around anchor {anchor}"
    return None


def check_bag(q: QuadResult, bag: Bag) -> None:
    defect = bag_defect(q.plane.rot, bag)
    if defect is not None:
        raise NotABag(defect, anchors=bag.anchors)


def reorder_bag(q: QuadResult, bag: Bag, perm: Sequence[int]) -> QuadResult:
    """Rewrite the bag's members into the order perm; faces keep their lengths."""
    perm = list(perm)
    if set(perm) & set(bag.anchors):
        raise BadPermutation(f"permutation touches anchor(s) {set(perm) & set(bag.anchors)}")
    if len(perm) != len(bag.members) or set(perm) != set(bag.members):
        raise BadPermutation("permutation is not a rearrangement of the bag members")
    check_bag(q, bag)
    q.plane.rewrite_block(bag.anchors[0], bag.anchors[1], bag.members, perm)
    bag.members = perm
    return q


def insertion_limits(c: int, k: int) -> Tuple[int, int]:
    """(good_threshold, capacity) for chunk cap c."""
    capacity = max(1, c // (128 * k * k))
    good = max(math.ceil(c / (32 * k * k)), 2 * capacity + 2)
    return good, capacity


def plan_insertions(bags: Sequence[Bag], L: Sequence[int], host: Graph, k: int,
                    n: int) -> InsertionPlan:
    """Sequential greedy: each bag in turn takes up to `capacity` leftovers it is good for."""
    good, capacity = insertion_limits(icbrt(n), k)
    bags = list(bags)
    plan = InsertionPlan(leftovers=list(L), bags=bags, assignment={},
                         good_threshold=good, capacity=capacity)
    if not L:
        return plan
    member_sets = [frozenset(b.members) for b in bags]
    unassigned = list(L)
    for index, members in enumerate(member_sets):
        if not unassigned:
            break
        taken = [v for v in unassigned if len(host.neighbors(v) & members) >= good][:capacity]
        if taken:
            plan.assignment[index] = taken
            chosen = set(taken)
            unassigned = [v for v in unassigned if v not in chosen]
    if unassigned:
        v = unassigned[0]
        good_bags = sum(1 for members in member_sets if len(host.neighbors(v) & members) >= good)
        raise UnassignableVertex(f"leftover {v} has no bag with free capacity "
                                 f"({good_bags} good bag(s), threshold {good})",
                                 vertex=v, good_bags=good_bags, unassigned=len(unassigned))
    logger.info(f"📋 Planned {len(L)} insertion(s) into {len(plan.assignment)} bag(s) "
                f"(threshold {good}, capacity {capacity})")
    return plan


def _pair_members(interior: Sequence[int], assigned: Sequence[int],
                  host: Graph) -> Dict[int, Tuple[int, int]]:
    """Two distinct interior neighbours per assigned vertex (bipartite matching)."""
    matching_graph = nx.Graph()
    slots = [("slot", v, s) for v in assigned for s in (0, 1)]
    matching_graph.add_nodes_from(slots, bipartite=0)
    matching_graph.add_nodes_from((("member", m) for m in interior), bipartite=1)
    for node in slots:
        v = node[1]
        matching_graph.add_edges_from((node, ("member", m)) for m in interior if host.has_edge(v, m))
    matching = nx.bipartite.hopcroft_karp_matching(matching_graph, top_nodes=slots)
    if any(node not in matching for node in slots):
        raise PairingImpossible(f"{len(assigned)} vertex(es) cannot be paired among "
                                f"{len(interior)} interior members",
                                assigned=list(assigned), interior=len(interior))
    return {v: (matching[("slot", v, 0)][1], matching[("slot", v, 1)][1]) for v in assigned}


def _owner(qs: Sequence[QuadResult], bag: Bag) -> QuadResult:
    for q in qs:
        if any(b is bag for b in q.bags):
            return q
    raise NotABag(f"bag with anchors {bag.anchors} belongs to no quadrangulation")


def execute_insertions(qs: Sequence[QuadResult], plan: InsertionPlan,
                       host: Graph) -> Sequence[QuadResult]:
    """
    Insert every assigned leftover next to two consecutive interior members of
    its bag. When two interior members see the whole assigned list, the list
    goes into their face as one new bag; otherwise members are matched.

    Used members move to the front of the bag before insertion, so the bag
    keeps both extreme members and every member still of degree two.
    """
    for index, assigned in sorted(plan.assignment.items()):
        bag = plan.bags[index]
        q = _owner(qs, bag)
        first, interior, last = bag.members[0], bag.members[1:-1], bag.members[-1]
        a0, a1 = bag.anchors
        common = [m for m in interior if all(host.has_edge(v, m) for v in assigned)]

        if len(common) >= 2:
            pa, pb = common[0], common[1]
            rest = [m for m in interior if m not in (pa, pb)]
            reorder_bag(q, bag, [pa, pb, first] + rest + [last])
            q.plane.insert_into_face((pb, a1, pa, a0), assigned)
            q.bags.append(Bag(anchors=(pb, pa), members=list(assigned)))
            q.insertions.extend((v, pa, pb) for v in assigned)
            bag.members = [first] + rest + [last]
            continue

        pairs = _pair_members(interior, assigned, host)
        paired = [m for v in assigned for m in pairs[v]]
        rest = [m for m in interior if m not in set(paired)]
        reorder_bag(q, bag, paired + [first] + rest + [last])
        for v in assigned:
            pa, pb = pairs[v]
            q.plane.insert_into_face((pb, a1, pa, a0), [v])
            q.insertions.append((v, pa, pb))
        bag.members = [first] + rest + [last]

    for q in qs:
        q.bags = [b for b in q.bags if b.members]
    inserted = sum(len(a) for a in plan.assignment.values())
    if inserted:
        logger.info(f"➕ Inserted {inserted} leftover vertex(es)")
    return qs
