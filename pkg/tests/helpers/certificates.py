# tests/helpers/certificates.py

from typing import Tuple

import networkx as nx

from src.core.certificate import QUADRANGULATION, TRIANGULATION, Certificate, CertificateComponent
from src.core.constants import RunStatus
from src.core.graph import Graph, input_hash
from src.core.plane import RotationSystem
from src.core.quad import Bag, PlaneGraph
from tests.helpers.instances import InstanceFactory


class CertificateFactory:
    """Hand-built certificates that pass verification before any tampering."""

    @staticmethod
    def component(kind: str, rotation: RotationSystem, bags=()) -> CertificateComponent:
        return CertificateComponent(kind=kind, vertices=rotation.vertices, edges=rotation.edges(),
                                    rotation=rotation, bags=list(bags))

    @staticmethod
    def wrap(g: Graph, gamma: float, k: int, *components: CertificateComponent) -> Certificate:
        total = sum(len(c.edges) for c in components)
        return Certificate(input_hash=input_hash(g), n=g.n, gamma=gamma, k=k, case=2,
                           status=RunStatus.SUCCESS, components=list(components),
                           edge_count=total, claimed_bound=2 * g.n - 4 * k)

    @staticmethod
    def k4_triangulation() -> Tuple[Graph, Certificate]:
        """K4 as one triangulation; gamma 0.4 gives k = 1 and bound 4."""
        g = InstanceFactory.from_networkx(nx.complete_graph(4))
        rotation = InstanceFactory.embedded(nx.complete_graph(4))
        return g, CertificateFactory.wrap(g, 0.4, 1,
                                          CertificateFactory.component(TRIANGULATION, rotation))

    @staticmethod
    def k27_quadrangulation() -> Tuple[Graph, Certificate]:
        """K_{2,7} with anchors 0 and 1 and one bag of seven; gamma 0.2 gives k = 2."""
        members = list(range(2, 9))
        g = Graph.from_edges(9, [(a, m) for a in (0, 1) for m in members])
        plane = PlaneGraph()
        plane.add_double_star(0, 1, members)
        component = CertificateFactory.component(QUADRANGULATION, plane.freeze(),
                                                 [Bag(anchors=(0, 1), members=members)])
        return g, CertificateFactory.wrap(g, 0.2, 2, component)
