# src/core/constants.py

from enum import Enum, IntEnum
from pathlib import Path


class FaceClass(Enum):
    """Shape of a plane graph judged by its face walks."""
    QUADRANGULATION = "QUADRANGULATION"  # every face walk has length 4
    TRIANGULATION = "TRIANGULATION"      # every face walk has length 3
    OTHER = "OTHER"


class VerdictStatus(Enum):
    """
    Outcome of an epsilon-regularity check.
    - REGULAR_CERTIFIED: exhaustive enumeration (or a 0/1 density) proves regularity.
    - IRREGULAR_WITNESS: a re-verified sub-pair deviates by more than eps.
    - NO_WITNESS_FOUND: heuristic search failed to refute; one-sided.
    - SPARSE_UNTESTED: density below d, so the pair never enters the reduced
      graph and no check was run.
    """
    REGULAR_CERTIFIED = "REGULAR_CERTIFIED"
    IRREGULAR_WITNESS = "IRREGULAR_WITNESS"
    NO_WITNESS_FOUND = "NO_WITNESS_FOUND"
    SPARSE_UNTESTED = "SPARSE_UNTESTED"


class HypothesisStatus(Enum):
    VERIFIED = "verified"
    WAIVED = "waived"
    VIOLATED = "violated"


class RunStatus(Enum):
    SUCCESS = "SUCCESS"
    FAILED = "FAILED"


class ExitCode(IntEnum):
    OK = 0
    VERIFICATION_FAILURE = 1
    STAGE_FAILURE = 2
    INPUT_ERROR = 3


class SystemPaths:
    """
    Standardized paths, resolved against the repository root so the CLI
    works from any working directory.
    """
    ROOT_DIR = Path(__file__).resolve().parents[2]
    CONFIG_DIR = ROOT_DIR / "config"
    SCHEMA_DIR = ROOT_DIR / "schema"

    # Files
    PIPELINE_DEFAULTS = "pipeline_defaults.json"

    # Schemas
    PIPELINE_CONFIG_SCHEMA = "pipeline_config_schema.json"
    CERTIFICATE_SCHEMA = "certificate_schema.json"


class Defaults:
    """Desk-scale fallbacks used when no configuration file is mounted."""
    EPS = 0.05
    D = 0.25
    TRIANGULATION_ORDER = 12
    EMBED_RESTARTS = 20
    REGULARITY_RESTARTS = 10
    MAX_RECURSION_DEPTH = 3
    MAX_CLUSTERS = 16
    SIMILARITY_THRESHOLD = 0.75
    EXHAUSTIVE_LIMIT = 12
    ORACLE_NODE_BUDGET = 200_000
