# src/core/certificate.py

"""
The extraction certificate and its independent checker.

verify_certificate trusts nothing the pipeline computed: it re-derives faces
from the stored rotation systems and compares every claim against the input
graph.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.core.constants import RunStatus
from src.core.errors import ExtractionError, InputFormatError
from src.core.graph import Edge, Graph, input_hash
from src.core.plane import RotationSystem, trace_faces
from src.core.quad import Bag, bag_defect
from src.core.structure import compute_k

logger = logging.getLogger("Extractor.Certificate")

QUADRANGULATION = "quadrangulation"
TRIANGULATION = "triangulation"
FACE_LENGTH = {QUADRANGULATION: 4, TRIANGULATION: 3}


@dataclass(slots=True)
class CertificateComponent:
    kind: str
    vertices: List[int]
    edges: List[Edge]
    rotation: RotationSystem
    bags: List[Bag] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "rotation": self.rotation.to_rows(self.vertices),
            "bags": [{"anchors": list(b.anchors), "members": list(b.members)} for b in self.bags],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CertificateComponent":
        return cls(
            kind=data["kind"],
            vertices=list(data["vertices"]),
            edges=[tuple(e) for e in data["edges"]],
            rotation=RotationSystem.from_rows(data["vertices"], data["rotation"]),
            bags=[Bag(anchors=tuple(b["anchors"]), members=list(b["members"])) for b in data["bags"]],
        )


@dataclass(slots=True)
class Certificate:
    input_hash: str
    n: int
    gamma: float
    k: int
    case: int
    status: RunStatus
    components: List[CertificateComponent] = field(default_factory=list)
    insertions: List[Tuple[int, int, int]] = field(default_factory=list)
    edge_count: int = 0
    claimed_bound: int = 0
    hypotheses: List[Dict[str, str]] = field(default_factory=list)
    failure: Optional[Dict[str, Any]] = None

    @property
    def actual_edge_count(self) -> int:
        return sum(len(c.edges) for c in self.components)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_hash": self.input_hash,
            "n": self.n,
            "gamma": self.gamma,
            "k": self.k,
            "case": self.case,
            "status": self.status.value,
            "components": [c.to_dict() for c in self.components],
            "insertions": [list(i) for i in self.insertions],
            "edge_count": self.edge_count,
            "claimed_bound": self.claimed_bound,
            "hypotheses": list(self.hypotheses),
            "failure": self.failure,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Certificate":
        try:
            return cls(
                input_hash=data["input_hash"],
                n=data["n"],
                gamma=data["gamma"],
                k=data["k"],
                case=data["case"],
                status=RunStatus(data["status"]),
                components=[CertificateComponent.from_dict(c) for c in data["components"]],
                insertions=[tuple(i) for i in data["insertions"]],
                edge_count=data["edge_count"],
                claimed_bound=data["claimed_bound"],
                hypotheses=list(data["hypotheses"]),
                failure=data["failure"],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"certificate document malformed: {e}") from e

    @classmethod
    def failed(cls, g: Graph, gamma: float, k: int, error: ExtractionError,
               hypotheses: List[Dict[str, str]]) -> "Certificate":
        return cls(
            input_hash=input_hash(g), n=g.n, gamma=gamma, k=k, case=0,
            status=RunStatus.FAILED, claimed_bound=2 * g.n - 4 * k,
            hypotheses=hypotheses,
            failure={
                "stage": error.stage,
                "error": error.__class__.__name__,
                "message": str(error),
                "statistics": {key: _plain(value) for key, value in error.statistics.items()},
            },
        )


def _plain(value: Any) -> Any:
    """JSON-friendly rendering of error statistics."""
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(v) for v in value]
    return str(value)


@dataclass(slots=True)
class VerificationReport:
    violations: List[str] = field(default_factory=list)
    checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def expect(self, condition: bool, message: str) -> bool:
        self.checks += 1
        if not condition:
            self.violations.append(message)
        return condition


def _verify_component(g: Graph, index: int, comp: CertificateComponent,
                      report: VerificationReport) -> None:
    label = f"component {index}"
    rs = comp.rotation
    report.expect(comp.kind in FACE_LENGTH, f"{label}: unknown kind {comp.kind!r}")
    report.expect(sorted(comp.vertices) == rs.vertices,
                  f"{label}: rotation vertices differ from the vertex list")
    report.expect(len(set(comp.vertices)) == len(comp.vertices), f"{label}: repeated vertex")
    in_range = all(0 <= v < g.n for v in comp.vertices)
    report.expect(in_range, f"{label}: vertex outside 0..{g.n - 1}")
    edges = sorted(tuple(sorted(e)) for e in comp.edges)
    report.expect(edges == rs.edges(), f"{label}: edge list differs from the rotation system")
    if in_range:
        foreign = [e for e in rs.edges() + edges if not g.has_edge(*e)]
        report.expect(not foreign, f"{label}: containment violation, {foreign[:3]} not in G")

    faces = trace_faces(rs, planar_claim=False)
    report.expect(all(chi == 2 for chi in faces.component_euler),
                  f"{label}: EulerViolation, Euler characteristics {list(faces.component_euler)}")
    report.expect(len(rs.components()) == 1, f"{label}: rotation system is disconnected")
    expected = FACE_LENGTH.get(comp.kind)
    if expected is not None:
        wrong = [len(f) for f in faces.faces if len(f) != expected]
        report.expect(not wrong, f"{label}: face-length violation, lengths {sorted(set(wrong))} "
                                 f"in a {comp.kind}")
        m = len(comp.vertices)
        target = 2 * m - 4 if expected == 4 else 3 * m - 6
        report.expect(rs.edge_count == target,
                      f"{label}: {rs.edge_count} edges, a {comp.kind} on {m} vertices has {target}")

    rot = {v: rs.rotation(v) for v in rs.vertices}
    seen: set = set()
    for bag in comp.bags:
        defect = bag_defect(rot, bag)
        report.expect(defect is None, f"{label}: bag invariant broken, {defect}")
        vertices = set(bag.members)
        report.expect(not vertices & seen, f"{label}: bags overlap")
        seen |= vertices


def verify_certificate(g: Graph, cert: Certificate) -> VerificationReport:
    """Re-checks containment, planarity, face lengths, disjointness and the edge bound."""
    report = VerificationReport()
    report.expect(cert.n == g.n, f"certificate is for n={cert.n}, graph has n={g.n}")
    report.expect(cert.input_hash == input_hash(g), "input hash mismatch")
    try:
        k = compute_k(cert.gamma)
    except ExtractionError:
        k = None
    report.expect(k is not None and k == cert.k, f"k={cert.k} inconsistent with gamma={cert.gamma}")
    if k is not None:
        report.expect(cert.claimed_bound == 2 * g.n - 4 * k,
                      f"claimed bound {cert.claimed_bound} != 2n - 4k = {2 * g.n - 4 * k}")

    owner: Dict[int, int] = {}
    duplicates = set()
    for index, comp in enumerate(cert.components):
        _verify_component(g, index, comp, report)
        for v in comp.vertices:
            if v in owner and owner[v] != index:
                duplicates.add(v)
            owner[v] = index
    report.expect(not duplicates,
                  f"components not vertex-disjoint, {sorted(duplicates)[:5]} repeated")

    actual = cert.actual_edge_count
    report.expect(cert.edge_count == actual,
                  f"declared edge count {cert.edge_count} != actual {actual}")
    if cert.status is RunStatus.SUCCESS:
        report.expect(cert.failure is None, "successful certificate carries a failure record")
        report.expect(len(owner) == g.n, f"{g.n - len(owner)} vertex(es) not covered")
        report.expect(actual >= cert.claimed_bound,
                      f"{actual} edges below the claimed bound {cert.claimed_bound}")
    else:
        report.expect(cert.failure is not None, "failed certificate without a failure record")

    if report.passed:
        logger.info(f"✅ Certificate verified: {report.checks} checks, {actual} edges")
    else:
        logger.error(f"❌ Certificate rejected: {len(report.violations)} violation(s)")
    return report
