# tests/io/test_certificate_store.py

import json
from unittest.mock import patch

import pytest

from src.core.certificate import verify_certificate
from src.core.errors import InputFormatError
from src.io.certificate_store import load_certificate, save_certificate
from tests.helpers.certificates import CertificateFactory


class TestCertificateStore:

    def test_save_then_load_verifies(self, tmp_path):
        g, cert = CertificateFactory.k27_quadrangulation()
        path = tmp_path / "out" / "cert.json"
        save_certificate(cert, path)
        loaded = load_certificate(path)
        assert loaded.to_dict() == cert.to_dict()
        assert verify_certificate(g, loaded).passed

    def test_schema_breach_on_load(self, tmp_path):
        _, cert = CertificateFactory.k4_triangulation()
        document = cert.to_dict()
        document["case"] = 7
        path = tmp_path / "cert.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        with patch("src.core.config_loader.logger") as mock_logger:
            with pytest.raises(InputFormatError):
                load_certificate(path)
            mock_logger.critical.assert_called_once()

    def test_schema_breach_on_save(self, tmp_path):
        _, cert = CertificateFactory.k4_triangulation()
        cert.input_hash = "not-a-digest"
        path = tmp_path / "cert.json"
        with pytest.raises(InputFormatError):
            save_certificate(cert, path)
        assert not path.exists(), "❌ a rejected certificate must not reach disk"

    def test_unreadable(self, tmp_path):
        path = tmp_path / "cert.json"
        path.write_text("{ truncated", encoding="utf-8")
        with pytest.raises(InputFormatError, match="unreadable"):
            load_certificate(path)
        with pytest.raises(InputFormatError):
            load_certificate(tmp_path / "absent.json")
