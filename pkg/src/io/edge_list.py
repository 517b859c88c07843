# src/io/edge_list.py

"""
Edge-list text format and the partition label sidecar.

Edge list: first line "n m", then m lines "u v" with 0 <= u < v < n,
ASCII, newline-terminated. Sidecar: n lines, one integer label per line
(-1 marks the exceptional set).
"""

import logging
from pathlib import Path
from typing import List, Sequence, Tuple

from src.core.errors import InputFormatError
from src.core.graph import Edge, Graph

logger = logging.getLogger("Extractor.EdgeList")


def _ints(line: str, expected: int, where: str) -> Tuple[int, ...]:
    fields = line.split()
    if len(fields) != expected:
        raise InputFormatError(f"{where}: expected {expected} integers, got {line.strip()!r}")
    try:
        return tuple(int(f) for f in fields)
    except ValueError as e:
        raise InputFormatError(f"{where}: non-integer field in {line.strip()!r}") from e


def parse_edge_list(text: str) -> Graph:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise InputFormatError("empty edge list: missing 'n m' header")
    n, m = _ints(lines[0], 2, "header")
    if n < 0 or m < 0:
        raise InputFormatError(f"header: negative counts n={n}, m={m}")
    body = lines[1:]
    if len(body) != m:
        raise InputFormatError(f"header declares {m} edges, body has {len(body)}")
    edges: List[Edge] = []
    seen = set()
    for number, line in enumerate(body, start=2):
        u, v = _ints(line, 2, f"line {number}")
        if not 0 <= u < v < n:
            raise InputFormatError(f"line {number}: edge ({u}, {v}) violates 0 <= u < v < {n}")
        if (u, v) in seen:
            raise InputFormatError(f"line {number}: duplicate edge ({u}, {v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.e}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path: Path) -> Graph:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as e:
        raise InputFormatError(f"cannot read edge list {path}: {e}") from e
    g = parse_edge_list(text)
    logger.info(f"📥 Loaded {path.name}: n={g.n}, e={g.e}")
    return g


def write_edge_list(g: Graph, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_edge_list(g), encoding="ascii")
    logger.info(f"💾 Wrote {path.name}: n={g.n}, e={g.e}")


def read_labels(path: Path, n: int) -> List[int]:
    path = Path(path)
    try:
        lines = [line for line in path.read_text(encoding="ascii").splitlines() if line.strip()]
    except (OSError, UnicodeDecodeError) as e:
        raise InputFormatError(f"cannot read label sidecar {path}: {e}") from e
    if len(lines) != n:
        raise InputFormatError(f"label sidecar has {len(lines)} lines for {n} vertices")
    labels = [_ints(line, 1, f"label line {i + 1}")[0] for i, line in enumerate(lines)]
    if any(label < -1 for label in labels):
        raise InputFormatError("labels must be -1 (exceptional) or a part index >= 0")
    return labels


def write_labels(labels: Sequence[int], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{label}\n" for label in labels), encoding="ascii")
