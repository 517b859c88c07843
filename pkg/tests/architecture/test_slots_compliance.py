# tests/architecture/test_slots_compliance.py

import pytest

from src.core.graph import Graph
from src.core.hypothesis_ledger import HypothesisLedger
from src.core.quad import Bag, PlaneGraph
from src.core.regularity import RegularityParams
from src.core.structure import SpanningTree
from tests.helpers.certificates import CertificateFactory
from tests.helpers.instances import InstanceFactory


def _instances():
    _, cert = CertificateFactory.k27_quadrangulation()
    return [
        Graph.from_edges(3, [(0, 1)]),
        InstanceFactory.cycle_rotation(4),
        HypothesisLedger(),
        PlaneGraph(),
        Bag(anchors=(0, 1), members=[2]),
        RegularityParams(eps=0.05, d=0.25),
        SpanningTree([0, 1], [(0, 1)]),
        cert,
        cert.components[0],
    ]


@pytest.mark.parametrize("obj", _instances(), ids=lambda o: type(o).__name__)
def test_slots_compliance(obj):
    """Long-lived objects are slotted: no per-instance __dict__, no stray attributes."""
    assert not hasattr(obj, "__dict__"), f"❌ {type(obj).__name__} carries a __dict__"
    with pytest.raises((AttributeError, TypeError)):
        obj.stray_attribute = True
