# tests/behavior/test_extraction.py

import pytest

from src.core.certificate import QUADRANGULATION, TRIANGULATION, verify_certificate
from src.core.constants import HypothesisStatus, RunStatus
from src.core.errors import ConfigurationError, OutOfRange
from src.core.generators import gen_disjoint_biclique, gen_template_blowup, gen_tree_blowup
from src.core.graph import Graph
from src.core.hypothesis_ledger import HypothesisLedger
from src.core.pipeline import extract_planar
from tests.helpers.instances import InstanceFactory


def _extract(g, gamma, **overrides):
    ledger = HypothesisLedger()
    cert = extract_planar(g, gamma, InstanceFactory.desk_config(gamma, **overrides), ledger)
    return cert, ledger


class TestExtractionFailures:

    def test_low_minimum_degree_gives_failed_certificate(self):
        g = Graph.from_edges(10, InstanceFactory.path_edges(10))
        cert, ledger = _extract(g, 0.3)
        assert cert.status is RunStatus.FAILED
        assert cert.failure["error"] == "LowMinimumDegree"
        assert cert.failure["statistics"] == {"min_degree": 1}
        assert cert.components == [] and cert.edge_count == 0
        assert ledger.entries[0].status is HypothesisStatus.VIOLATED
        assert verify_certificate(g, cert).passed, "❌ a FAILED certificate is still self-consistent"

    def test_gamma_out_of_range(self):
        g = gen_disjoint_biclique(1, 4)
        with pytest.raises(OutOfRange):
            extract_planar(g, 0.5)

    def test_config_for_another_gamma_is_rejected(self):
        g = gen_disjoint_biclique(1, 4)
        with pytest.raises(ConfigurationError):
            extract_planar(g, 0.3, InstanceFactory.desk_config(0.25))

    def test_size_waiver_does_not_waive_embedding_degree(self):
        g = gen_disjoint_biclique(1, 40)
        cert, _ = _extract(g, 0.4, waive_degree_check=False)
        assert cert.status is RunStatus.FAILED
        assert cert.failure["error"] == "PreconditionViolated"
        assert "sqrt(n)/ln(n)" in cert.failure["message"]
        assert verify_certificate(g, cert).passed

    def test_degree_waiver_is_recorded(self):
        g = gen_disjoint_biclique(1, 40)
        cert, ledger = _extract(g, 0.4)
        assert cert.status is RunStatus.SUCCESS, cert.failure
        assert cert.edge_count == 2 * 80 - 4
        waived = [e for e in ledger.entries if e.name == "embedding degree"]
        assert waived and all(e.status is HypothesisStatus.WAIVED for e in waived)


@pytest.mark.slow
class TestExtractionEndToEnd:

    @pytest.mark.parametrize("copies, t, gamma", [
        (1, 300, 0.4),
        (2, 500, 0.25),
        (3, 300, 1 / 6),
        (1, 500, 0.4),
        (2, 300, 0.25),
        (3, 500, 1 / 6),
    ])
    def test_disjoint_bicliques_meet_the_bound_exactly(self, copies, t, gamma):
        g = gen_disjoint_biclique(copies, t)
        cert, _ = _extract(g, gamma)
        assert cert.status is RunStatus.SUCCESS, cert.failure
        assert cert.k == copies
        assert cert.case == 2
        assert cert.edge_count == 2 * g.n - 4 * copies == cert.claimed_bound
        assert len(cert.components) == copies
        assert all(c.kind == QUADRANGULATION for c in cert.components)
        report = verify_certificate(g, cert)
        assert report.passed, report.violations

    def test_path_blowup(self):
        g, _ = gen_tree_blowup(InstanceFactory.path_edges(3), [200] * 3, 0.0, seed=0)
        cert, ledger = _extract(g, 0.3)
        assert cert.status is RunStatus.SUCCESS, cert.failure
        assert cert.edge_count == 1196
        assert verify_certificate(g, cert).passed
        assert ledger.summary()["violated"] == 0

    def test_complete_template_takes_triangulations(self):
        k4 = [(i, j) for i in range(4) for j in range(i + 1, 4)]
        g, _ = gen_template_blowup(k4, [150] * 4, 0.0, seed=0)
        cert, _ = _extract(g, 0.45)
        assert cert.status is RunStatus.SUCCESS, cert.failure
        assert cert.case == 1
        assert any(c.kind == TRIANGULATION for c in cert.components)
        assert cert.edge_count >= cert.claimed_bound
        report = verify_certificate(g, cert)
        assert report.passed, report.violations
