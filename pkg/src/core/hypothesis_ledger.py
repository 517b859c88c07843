# src/core/hypothesis_ledger.py

import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional

from src.core.constants import HypothesisStatus
from src.core.errors import ConfigurationError

logger = logging.getLogger("Extractor.Ledger")


@dataclass(frozen=True, slots=True)
class HypothesisEntry:
    name: str
    status: HypothesisStatus
    detail: str

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "status": self.status.value, "detail": self.detail}


class HypothesisLedger:
    """
    Per-run record of which structural hypotheses were verified, waived or
    violated, plus a Markdown audit trail written newest first.
    """

    __slots__ = ['entries', 'header']

    def __init__(self):
        self.entries: List[HypothesisEntry] = []
        self.header = "# 🧾 Planar Extraction Hypothesis Audit\n\n"

    def record(self, name: str, status: HypothesisStatus, detail: str) -> None:
        self.entries.append(HypothesisEntry(name, status, detail))
        if status is HypothesisStatus.VERIFIED:
            logger.info(f"✅ {name}: {detail}")
        else:
            logger.warning(f"⚠️ {name} {status.value}: {detail}")

    def check(self, name: str, holds: bool, detail: str, waived: bool = False) -> bool:
        """Records the outcome; a failing hypothesis is WAIVED when waived, else VIOLATED."""
        if holds:
            status = HypothesisStatus.VERIFIED
        elif waived:
            status = HypothesisStatus.WAIVED
        else:
            status = HypothesisStatus.VIOLATED
        self.record(name, status, detail)
        return holds

    def summary(self) -> Dict[str, int]:
        counts = {status.value: 0 for status in HypothesisStatus}
        for entry in self.entries:
            counts[entry.status.value] += 1
        return counts

    def to_list(self) -> List[Dict[str, str]]:
        return [e.to_dict() for e in self.entries]

    def write_audit(self, path: Path, title: str, metadata: Optional[Dict] = None) -> None:
        """Prepends one run's section under the shared header (newest first)."""
        path = Path(path)
        timestamp = datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M:%S UTC")
        meta_str = f" | {metadata}" if metadata else ""
        lines = [f"## [{timestamp}] {title}{meta_str}\n"]
        lines.extend(f"- **{e.name}** ({e.status.value}): {e.detail}\n" for e in self.entries)
        new_entry = "".join(lines) + "\n---\n\n"

        existing = ""
        if path.exists():
            try:
                existing = path.read_text(encoding="utf-8").replace(self.header, "")
            except OSError as e:
                logger.warning(f"Audit read warning: {e}. Re-initializing buffer.")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.header + new_entry + existing, encoding="utf-8")
        except OSError as e:
            logger.critical(f"Critical audit write failure: {e}")
            raise ConfigurationError(f"could not write audit {path}: {e}") from e
