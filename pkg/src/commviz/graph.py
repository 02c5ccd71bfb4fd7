"""Edge-list parsing and the immutable graph representation.

Input is plain whitespace-separated edge-list text (SNAP style): one edge per
line, `#` or `%` comment lines, arbitrary integer node ids. Ids are remapped
to dense 0-based integers in first-seen order so that every downstream stage
can use flat arrays instead of hash maps. Graphs are undirected; self-loops
are dropped at parse time, duplicate edges are kept (they carry weight in
real corpora) and edge order is preserved because the streaming detector is
order-sensitive.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable undirected multigraph over dense node ids 0..node_count-1."""

    node_count: int
    edges: np.ndarray   # (m, 2) int64, stream order
    degree: np.ndarray  # (node_count,) int64, endpoint counts

    def __post_init__(self):
        if self.edges.ndim != 2 or self.edges.shape[1] != 2:
            raise ValueError("edges must be an (m, 2) array")
        if int(self.degree.sum()) != 2 * len(self.edges):
            raise ValueError("degree sum must equal twice the edge count")

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class DegreeStats:
    mode_degree: int
    average_degree: float
    max_degree: int


def parse_edge_list(text) -> Graph:
    """Parse edge-list text (str, bytes, or an iterable of lines) into a Graph.

    Raises ParseError with the offending 1-based line number on malformed
    input, and on input containing no edges at all.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = [ln.decode() if isinstance(ln, bytes) else ln for ln in text]

    remap: dict[int, int] = {}
    src_list: list[int] = []
    dst_list: list[int] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#%":
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two tokens, got {len(parts)}")
        try:
            u_ext = int(parts[0])
            v_ext = int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token") from None
        if u_ext == v_ext:
            continue
        u = remap.setdefault(u_ext, len(remap))
        v = remap.setdefault(v_ext, len(remap))
        src_list.append(u)
        dst_list.append(v)

    if not src_list:
        raise ParseError("no edges")

    edges = np.stack([np.asarray(src_list, dtype=np.int64),
                      np.asarray(dst_list, dtype=np.int64)], axis=1)
    n = len(remap)
    degree = np.bincount(edges.ravel(), minlength=n).astype(np.int64)
    return Graph(node_count=n, edges=edges, degree=degree)


def load_edge_list(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path_or_file) -> None:
    """Serialize as parseable edge-list text (dense ids, stream order)."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", encoding="utf-8") if own else path_or_file
    try:
        buf = io.StringIO()
        for u, v in g.edges:
            buf.write(f"{u} {v}\n")
        fh.write(buf.getvalue())
    finally:
        if own:
            fh.close()


def from_edge_array(edges, node_count=None) -> Graph:
    """Build a Graph from an already-dense (m, 2) integer array."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    keep = edges[:, 0] != edges[:, 1]
    edges = edges[keep]
    if node_count is None:
        node_count = int(edges.max()) + 1 if len(edges) else 0
    degree = np.bincount(edges.ravel(), minlength=node_count).astype(np.int64)
    return Graph(node_count=node_count, edges=edges, degree=degree)


def degree_stats(g: Graph) -> DegreeStats:
    """Mode (most frequent nonzero degree, ties toward smaller), mean, max."""
    if g.edge_count == 0:
        raise ValueError("degree stats undefined for a graph with no edges")
    nonzero = g.degree[g.degree > 0]
    counts = np.bincount(nonzero)
    mode = int(np.argmax(counts))  # argmax returns the smallest index on ties
    return DegreeStats(
        mode_degree=mode,
        average_degree=float(g.degree.sum() / g.node_count),
        max_degree=int(g.degree.max()),
    )
