# src/core/errors.py

"""
Stage-tagged failures.

Every error raised by the library derives from ExtractionError, carries the
pipeline stage it belongs to and the statistics gathered before it fired.
A failure is a statement about a hypothesis at desk scale, never a silent
fallback.
"""

from typing import Any, Dict


class ExtractionError(RuntimeError):
    stage = "GENERIC"

    def __init__(self, message: str, **statistics: Any):
        super().__init__(f"❌ {self.__class__.__name__}: {message}")
        self.statistics: Dict[str, Any] = statistics


# --- Input / configuration ---

class InputFormatError(ExtractionError):
    stage = "INPUT"


class ConfigurationError(ExtractionError):
    stage = "CONFIG"


# --- graph-core ---

class NotATree(ExtractionError):
    stage = "GENERATE"


class Unbalanced(ExtractionError):
    stage = "GENERATE"


# --- plane ---

class EulerViolation(ExtractionError):
    stage = "PLANE"


# --- regularity ---

class EmptyPart(ExtractionError):
    stage = "REGULARITY"


class Overlap(ExtractionError):
    stage = "REGULARITY"


class TooLargeForExhaustive(ExtractionError):
    stage = "REGULARITY"


class BadPartition(ExtractionError):
    stage = "PARTITION"


class PartitionPoor(ExtractionError):
    stage = "PARTITION"


class CleaningOverflow(ExtractionError):
    stage = "CLEANING"


# --- structure ---

class OutOfRange(ExtractionError):
    stage = "STRUCTURE"


class TriangleNotFound(ExtractionError):
    stage = "STRUCTURE"


class PreconditionViolated(ExtractionError):
    stage = "STRUCTURE"


class NoSwapAvailable(ExtractionError):
    stage = "STRUCTURE"


# --- quad ---

class OutOfHostPairs(ExtractionError):
    stage = "QUADRANGULATION"


class NotABag(ExtractionError):
    stage = "BAGS"


class BadPermutation(ExtractionError):
    stage = "BAGS"


class UnassignableVertex(ExtractionError):
    stage = "INSERTION"


class PairingImpossible(ExtractionError):
    stage = "INSERTION"


# --- embed ---

class EmbedFailed(ExtractionError):
    stage = "EMBED"


class BadOrder(ExtractionError):
    stage = "EMBED"


# --- oracle ---

class BudgetExhausted(ExtractionError):
    stage = "ORACLE"

    def __init__(self, message: str, best: Any = None, **statistics: Any):
        super().__init__(message, **statistics)
        self.best = best


# --- pipeline ---

class LowMinimumDegree(ExtractionError):
    stage = "HYPOTHESIS"


class BoundNotMet(ExtractionError):
    stage = "CERTIFICATE"
