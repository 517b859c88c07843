# tests/core/test_hypothesis_ledger.py

from unittest.mock import patch

import pytest

from src.core.constants import HypothesisStatus
from src.core.errors import ConfigurationError
from src.core.hypothesis_ledger import HypothesisLedger


class TestHypothesisLedger:

    def test_check_outcomes(self):
        ledger = HypothesisLedger()
        assert ledger.check("minimum degree", True, "ok")
        assert not ledger.check("size", False, "n too small", waived=True)
        assert not ledger.check("partition", False, "V_0 too large")
        statuses = [e.status for e in ledger.entries]
        assert statuses == [HypothesisStatus.VERIFIED, HypothesisStatus.WAIVED,
                            HypothesisStatus.VIOLATED]
        assert ledger.summary() == {"verified": 1, "waived": 1, "violated": 1}

    def test_non_verified_entries_warn(self):
        ledger = HypothesisLedger()
        with patch("src.core.hypothesis_ledger.logger") as mock_logger:
            ledger.record("size", HypothesisStatus.WAIVED, "n=100")
            mock_logger.warning.assert_called_once()
            mock_logger.info.assert_not_called()

    def test_to_list_is_plain(self):
        ledger = HypothesisLedger()
        ledger.record("arrangeability", HypothesisStatus.VERIFIED, "ordering achieves 3")
        assert ledger.to_list() == [{"name": "arrangeability", "status": "verified",
                                     "detail": "ordering achieves 3"}]

    def test_audit_is_newest_first(self, tmp_path):
        path = tmp_path / "audit" / "HYPOTHESES.md"
        first = HypothesisLedger()
        first.record("run", HypothesisStatus.VERIFIED, "first run")
        first.write_audit(path, "extract a.txt")
        second = HypothesisLedger()
        second.record("run", HypothesisStatus.WAIVED, "second run")
        second.write_audit(path, "extract b.txt", metadata={"n": 10})

        text = path.read_text(encoding="utf-8")
        assert text.startswith(first.header)
        assert text.count(first.header) == 1, "❌ header must appear exactly once"
        assert text.index("second run") < text.index("first run")
        assert "{'n': 10}" in text

    def test_audit_write_failure(self, tmp_path):
        ledger = HypothesisLedger()
        with patch("pathlib.Path.write_text", side_effect=OSError("read-only")):
            with pytest.raises(ConfigurationError):
                ledger.write_audit(tmp_path / "audit.md", "extract")
