# tests/core/test_quad.py

import numpy as np
import pytest

from src.core.constants import FaceClass
from src.core.errors import (BadPermutation, NotABag, OutOfHostPairs, PreconditionViolated,
                             UnassignableVertex, Unbalanced)
from src.core.generators import random_tree_edges
from src.core.graph import Graph
from src.core.plane import classify
from src.core.quad import (Bag, BlowupInstance, InsertionPlan, PlaneGraph, QuadResult,
                           build_quadrangulation, check_bag, chunk_part, execute_insertions,
                           icbrt, insertion_limits, plan_insertions, reorder_bag)
from src.core.structure import SpanningTree
from tests.helpers.instances import InstanceFactory


def _k26() -> QuadResult:
    """K_{2,6}: anchors 0 and 1, members 2..7 in one bag."""
    plane = PlaneGraph()
    plane.add_double_star(0, 1, list(range(2, 8)))
    return QuadResult(plane=plane, bags=[Bag(anchors=(0, 1), members=list(range(2, 8)))],
                      chunk_plan={}, uncovered_count=0, chunk_cap=6)


def _plan(bag: Bag, assigned) -> InsertionPlan:
    return InsertionPlan(leftovers=list(assigned), bags=[bag], assignment={0: list(assigned)},
                         good_threshold=2, capacity=len(assigned))


def _tree_instance(sizes, tree_edges, host=None) -> BlowupInstance:
    parts = InstanceFactory.complete_bipartite_parts(sizes)
    return BlowupInstance(parts=parts, tree=SpanningTree(parts, tree_edges), host=host)


class TestHelpers:

    @pytest.mark.parametrize("n, c", [(0, 0), (1, 1), (7, 1), (8, 2), (26, 2), (27, 3), (1000, 10)])
    def test_icbrt(self, n, c):
        assert icbrt(n) == c

    def test_icbrt_negative(self):
        with pytest.raises(ValueError):
            icbrt(-1)

    def test_chunk_part_is_balanced(self):
        assert [len(c) for c in chunk_part(list(range(10)), 4)] == [4, 3, 3]
        assert chunk_part([1, 2], 5) == [[1, 2]]

    def test_insertion_limits(self):
        assert insertion_limits(2, 1) == (4, 1)
        assert insertion_limits(1000, 1) == (32, 7)


class TestPlaneGraph:

    def test_double_star_is_a_quadrangulation(self):
        q = _k26()
        assert q.plane.edge_count() == 12
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
        check_bag(q, q.bags[0])

    def test_face_insertion_keeps_quadrangulation(self):
        plane = PlaneGraph()
        faces = plane.add_double_star(0, 1, [2, 3, 4])
        new_faces = plane.insert_into_face(faces[0], [5, 6])
        assert plane.edge_count() == 2 * 7 - 4
        assert len(new_faces) == 1
        assert classify(plane.freeze()) is FaceClass.QUADRANGULATION


class TestReorderBag:

    def test_identity(self):
        q = _k26()
        reorder_bag(q, q.bags[0], list(range(2, 8)))
        assert q.plane.rot[0] == list(range(2, 8))

    def test_reversal_keeps_faces(self):
        q = _k26()
        bag = q.bags[0]
        reorder_bag(q, bag, list(range(7, 1, -1)))
        check_bag(q, bag)
        assert bag.members == [7, 6, 5, 4, 3, 2]
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION

    def test_touching_an_anchor_is_rejected(self):
        q = _k26()
        with pytest.raises(BadPermutation):
            reorder_bag(q, q.bags[0], [0, 3, 4, 5, 6, 7])

    def test_foreign_permutation_is_rejected(self):
        q = _k26()
        with pytest.raises(BadPermutation):
            reorder_bag(q, q.bags[0], [2, 3, 4, 5, 6])

    def test_broken_bag_detected(self):
        q = _k26()
        with pytest.raises(NotABag):
            check_bag(q, Bag(anchors=(0, 1), members=[2, 4]))


class TestInsertion:

    def test_common_neighbours_route(self):
        q = _k26()
        host = Graph.from_edges(9, [(8, m) for m in (3, 4, 5, 6)])
        execute_insertions([q], _plan(q.bags[0], [8]), host)
        assert q.plane.vertex_count() == 9 and q.plane.edge_count() == 14
        assert set(q.plane.rot[8]) == {3, 4}
        assert q.insertions == [(8, 3, 4)]
        assert q.bags[0].members == [2, 5, 6, 7], "❌ the bag must keep its extreme members"
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
        for bag in q.bags:
            check_bag(q, bag)

    def test_bag_accepts_a_second_round(self):
        q = _k26()
        host = Graph.from_edges(10, [(8, m) for m in (3, 4)] + [(9, m) for m in (5, 6)])
        execute_insertions([q], _plan(q.bags[0], [8]), host)
        execute_insertions([q], _plan(q.bags[0], [9]), host)
        assert q.bags[0].members == [2, 7]
        assert set(q.plane.rot[9]) == {5, 6}
        assert q.plane.edge_count() == 2 * 10 - 4
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
        for bag in q.bags:
            check_bag(q, bag)

    def test_shared_neighbours_form_a_new_bag(self):
        q = _k26()
        host = Graph.from_edges(11, [(v, m) for v in (8, 9, 10) for m in range(2, 8)])
        execute_insertions([q], _plan(q.bags[0], [8, 9, 10]), host)
        new_bags = [b for b in q.bags if b.members == [8, 9, 10]]
        assert len(new_bags) == 1
        check_bag(q, new_bags[0])
        assert q.plane.edge_count() == 2 * 11 - 4
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION

    def test_matching_route(self):
        q = _k26()
        host = Graph.from_edges(10, [(8, 3), (8, 4), (9, 5), (9, 6)])
        execute_insertions([q], _plan(q.bags[0], [8, 9]), host)
        assert set(q.plane.rot[8]) == {3, 4}
        assert set(q.plane.rot[9]) == {5, 6}
        assert q.plane.edge_count() == 2 * 10 - 4
        assert len(q.insertions) == 2
        assert q.bags[0].members == [2, 7]
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
        for bag in q.bags:
            check_bag(q, bag)


class TestPlanInsertions:

    def test_empty_leftovers(self):
        q = _k26()
        plan = plan_insertions(q.bags, [], Graph.from_edges(8, []), k=1, n=8)
        assert plan.assignment == {}

    def test_limits_follow_n(self):
        q = _k26()
        host = Graph.from_edges(9, [(8, m) for m in (3, 4, 5, 6)])
        plan = plan_insertions(q.bags, [8], host, k=1, n=9)
        assert (plan.good_threshold, plan.capacity) == (4, 1)
        assert plan.assignment == {0: [8]}

    def test_vertex_without_bag_neighbours(self):
        q = _k26()
        with pytest.raises(UnassignableVertex):
            plan_insertions(q.bags, [8], Graph.from_edges(9, []), k=1, n=9)

    def test_capacity_exhausted(self):
        q = _k26()
        host = Graph.from_edges(10, [(v, m) for v in (8, 9) for m in range(2, 8)])
        with pytest.raises(UnassignableVertex) as excinfo:
            plan_insertions(q.bags, [8, 9], host, k=1, n=10)
        assert excinfo.value.statistics["vertex"] == 9


class TestBuildQuadrangulation:

    def test_single_edge_blowup(self):
        q = build_quadrangulation(_tree_instance([50, 50], [(0, 1)]), waive_size_check=True)
        n = 100
        assert q.plane.vertex_count() == n
        assert q.plane.edge_count() == 2 * n - 4
        assert q.plane.max_degree() <= q.chunk_cap + 2
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
        assert q.bags, "❌ expected at least one bag"
        for bag in q.bags:
            check_bag(q, bag)
            assert q.chunk_cap / 2 <= len(bag.members) <= q.chunk_cap
        assert any("below (16r)^3" in message for message in q.diagnostics)

    def test_edges_run_along_the_tree(self):
        parts = InstanceFactory.complete_bipartite_parts([80, 80, 80])
        q = build_quadrangulation(_tree_instance([80, 80, 80], [(0, 1), (1, 2)]),
                                  waive_size_check=True)
        part_of = {v: i for i, members in parts.items() for v in members}
        assert all(abs(part_of[u] - part_of[v]) == 1 for u, v in q.plane.edges())

    def test_host_check(self):
        sizes = [40, 40]
        host = Graph.from_edges(80, [(u, v) for u in range(40) for v in range(40, 80)])
        q = build_quadrangulation(_tree_instance(sizes, [(0, 1)], host=host), waive_size_check=True)
        assert not any("missing from host" in message for message in q.diagnostics)

    def test_size_hypothesis_enforced(self):
        with pytest.raises(PreconditionViolated):
            build_quadrangulation(_tree_instance([50, 50], [(0, 1)]))

    def test_unbalanced_parts(self):
        with pytest.raises(Unbalanced):
            build_quadrangulation(_tree_instance([10, 30], [(0, 1)]), waive_size_check=True)

    def test_small_root_runs_out_of_pairs(self):
        star = [(0, 1), (0, 2), (0, 3)]
        with pytest.raises(OutOfHostPairs):
            build_quadrangulation(_tree_instance([8, 16, 16, 16], star), waive_size_check=True)

    def test_tree_must_span_the_parts(self):
        with pytest.raises(PreconditionViolated):
            build_quadrangulation(_tree_instance([10, 10, 10], [(0, 1)]), waive_size_check=True)

    @pytest.mark.slow
    def test_path_of_three_large_parts(self):
        n = 6000
        q = build_quadrangulation(_tree_instance([2000] * 3, [(0, 1), (1, 2)]),
                                  waive_size_check=True)
        assert q.chunk_cap == 18
        assert q.plane.edge_count() == 2 * n - 4
        assert q.plane.max_degree() <= 20
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
        for bag in q.bags:
            check_bag(q, bag)
        print(f"✅ {len(q.bags)} bags, {q.uncovered_count} uncovered")

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(20))
    def test_random_trees_keep_every_invariant(self, seed):
        rng = np.random.default_rng(seed)
        r = int(rng.integers(2, 7))
        base = int(rng.integers(10_000, 50_000)) // r
        sizes = [base + int(rng.integers(0, base // 2 + 1)) for _ in range(r)]
        n = sum(sizes)
        q = build_quadrangulation(_tree_instance(sizes, random_tree_edges(r, seed)),
                                  waive_size_check=True)
        cap = icbrt(n)
        assert q.chunk_cap == cap
        assert q.plane.vertex_count() == n
        assert q.plane.edge_count() == 2 * n - 4
        assert q.plane.max_degree() <= cap + 2
        assert q.uncovered_count <= 9 * n ** (2 / 3)
        assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
        for bag in q.bags:
            check_bag(q, bag)
            assert cap / 2 <= len(bag.members) <= cap
        assert not [m for m in q.diagnostics if "below (16r)^3" not in m and "chunk(s)" not in m]


class TestBagMechanics:
    """Random reorders and single-vertex insertions on one quadrangulation."""

    @staticmethod
    def _insert(q: QuadResult, bag: Bag, vertex: int, rng) -> None:
        interior = bag.members[1:-1]
        a, b = rng.choice(len(interior), size=2, replace=False).tolist()
        host = Graph.from_edges(vertex + 1, [(vertex, interior[a]), (vertex, interior[b])])
        execute_insertions([q], _plan(bag, [vertex]), host)
        assert set(q.plane.rot[vertex]) == {interior[a], interior[b]}

    @staticmethod
    def _reorder(q: QuadResult, bag: Bag, rng) -> None:
        perm = [bag.members[i] for i in rng.permutation(len(bag.members)).tolist()]
        reorder_bag(q, bag, perm)
        assert bag.members == perm

    def _run(self, operations: int, seed: int) -> int:
        rng = np.random.default_rng(seed)
        q = build_quadrangulation(_tree_instance([300, 300], [(0, 1)]), waive_size_check=True)
        next_vertex = q.plane.vertex_count()
        inserted = 0
        for _ in range(operations):
            vertices, edges = q.plane.vertex_count(), q.plane.edge_count()
            roomy = [b for b in q.bags if len(b.members) >= 4]
            if roomy and rng.random() < 0.5:
                self._insert(q, roomy[int(rng.integers(len(roomy)))], next_vertex, rng)
                next_vertex += 1
                inserted += 1
                assert (q.plane.vertex_count(), q.plane.edge_count()) == (vertices + 1, edges + 2)
            else:
                self._reorder(q, q.bags[int(rng.integers(len(q.bags)))], rng)
                assert (q.plane.vertex_count(), q.plane.edge_count()) == (vertices, edges)
            assert q.plane.edge_count() == 2 * q.plane.vertex_count() - 4
            assert classify(q.plane.freeze()) is FaceClass.QUADRANGULATION
            for each in q.bags:
                check_bag(q, each)
        return inserted

    def test_short_sequence(self):
        assert self._run(150, seed=0) > 0

    @pytest.mark.slow
    def test_thousand_operations(self):
        assert self._run(1000, seed=1) > 0
