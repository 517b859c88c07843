# tests/core/test_plane.py

import networkx as nx
import numpy as np
import pytest

from src.core.constants import FaceClass
from src.core.errors import EulerViolation, InputFormatError
from src.core.graph import Graph
from src.core.plane import (NonplanarWitness, RotationSystem, classify, is_planar, planarity_embed,
                            rotation_from_edges, trace_faces)
from tests.helpers.brute_planarity import brute_force_is_planar
from tests.helpers.instances import InstanceFactory


class TestPlanarityEmbed:

    def test_k4_has_four_faces(self):
        rotation = planarity_embed(InstanceFactory.from_networkx(nx.complete_graph(4)))
        assert isinstance(rotation, RotationSystem)
        assert trace_faces(rotation).lengths() == [3, 3, 3, 3]

    @pytest.mark.parametrize("nxg, kind", [
        (nx.complete_graph(5), "K5-subdivision"),
        (nx.complete_bipartite_graph(3, 3), "K33-subdivision"),
    ])
    def test_kuratowski_graphs_yield_witness(self, nxg, kind):
        g = InstanceFactory.from_networkx(nxg)
        witness = planarity_embed(g)
        assert isinstance(witness, NonplanarWitness)
        assert witness.kind == kind
        assert all(g.has_edge(u, v) for u, v in witness.edges), "❌ witness must be a subgraph"

    def test_disconnected_input_embeds_per_component(self):
        g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 0), (3, 4)])
        faces = trace_faces(planarity_embed(g))
        assert faces.component_euler == (2, 2, 2, 2)

    @pytest.mark.slow
    def test_agrees_with_exhaustive_minor_search(self):
        rng = np.random.default_rng(2024)
        disagreements = []
        for trial in range(1000):
            n = int(rng.integers(1, 9))
            p = float(rng.uniform(0.2, 0.9))
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
            g = Graph.from_edges(n, edges)
            if is_planar(g) != brute_force_is_planar(g):
                disagreements.append((trial, edges))
        assert not disagreements, f"❌ planarity deciders disagree on {disagreements[:3]}"


class TestFaceTraversal:

    def test_cube_has_six_square_faces(self):
        faces = trace_faces(InstanceFactory.cube())
        assert faces.lengths() == [4] * 6

    def test_cycle_has_two_faces(self):
        faces = trace_faces(InstanceFactory.cycle_rotation(5))
        assert faces.lengths() == [5, 5]

    def test_octahedron_has_eight_triangles(self):
        assert trace_faces(InstanceFactory.octahedron()).lengths() == [3] * 8

    def test_every_dart_on_exactly_one_face(self):
        rotation = InstanceFactory.embedded(nx.dodecahedral_graph())
        darts = []
        for face in trace_faces(rotation).faces:
            darts.extend(zip(face, face[1:] + face[:1]))
        assert len(darts) == len(set(darts)) == 2 * rotation.edge_count

    def test_non_planar_rotation_raises(self):
        # K4 with one vertex's order reversed lands on the torus.
        rotation = InstanceFactory.embedded(nx.complete_graph(4))
        rows = {v: list(rotation.rotation(v)) for v in rotation.vertices}
        rows[0] = rows[0][::-1]
        twisted = RotationSystem(rows)
        with pytest.raises(EulerViolation):
            trace_faces(twisted)
        assert trace_faces(twisted, planar_claim=False).genus == 1

    def test_isolated_vertex_is_one_face(self):
        faces = trace_faces(RotationSystem({0: []}))
        assert faces.component_euler == (2,)


class TestClassification:

    def test_cube_is_quadrangulation(self):
        assert classify(InstanceFactory.cube()) is FaceClass.QUADRANGULATION

    def test_octahedron_is_triangulation(self):
        assert classify(InstanceFactory.octahedron()) is FaceClass.TRIANGULATION

    def test_hexagon_is_other(self):
        assert classify(InstanceFactory.cycle_rotation(6)) is FaceClass.OTHER

    def test_quadrangulation_edge_count(self):
        rotation = InstanceFactory.embedded(nx.complete_bipartite_graph(2, 7))
        assert classify(rotation) is FaceClass.QUADRANGULATION
        assert rotation.edge_count == 2 * 9 - 4


class TestRotationSystem:

    def test_rows_round_trip_with_foreign_ids(self):
        rotation = RotationSystem.from_rows([10, 20, 30], [[20, 30], [30, 10], [10, 20]])
        assert rotation.to_rows([10, 20, 30]) == [[20, 30], [30, 10], [10, 20]]
        assert rotation.edges() == [(10, 20), (10, 30), (20, 30)]

    def test_missing_reverse_entry_rejected(self):
        with pytest.raises(InputFormatError):
            RotationSystem({0: [1], 1: []})

    def test_relabel(self):
        rotation = InstanceFactory.cycle_rotation(4).relabel({0: 7, 1: 8, 2: 9, 3: 6})
        assert rotation.vertices == [6, 7, 8, 9]
        assert rotation.rotation(7) == (6, 8)

    def test_rotation_from_edges_rejects_nonplanar(self):
        with pytest.raises(EulerViolation):
            rotation_from_edges(list(nx.complete_graph(5).edges()))
