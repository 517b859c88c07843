# src/io/certificate_store.py

"""
Certificate persistence. Every document is schema-checked on the way out
and on the way in; a certificate that does not match the schema is an
input error, never a partially trusted object.
"""

import json
import logging
from pathlib import Path

from src.core.certificate import Certificate
from src.core.config_loader import ConfigLoader
from src.core.constants import SystemPaths
from src.core.errors import InputFormatError

logger = logging.getLogger("Extractor.CertificateStore")


def save_certificate(cert: Certificate, path: Path) -> None:
    document = cert.to_dict()
    ConfigLoader.validate_integrity(document, SystemPaths.CERTIFICATE_SCHEMA, error=InputFormatError)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=1), encoding="utf-8")
    logger.info(f"💾 Certificate saved: {path.name} ({cert.status.value}, "
                f"{len(cert.components)} component(s))")


def load_certificate(path: Path) -> Certificate:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InputFormatError(f"certificate {path} unreadable: {e}") from e
    ConfigLoader.validate_integrity(document, SystemPaths.CERTIFICATE_SCHEMA, error=InputFormatError)
    return Certificate.from_dict(document)
