"""Contraction of a labeled graph into a weighted supergraph.

Each community becomes one supernode whose weight is the sketch estimate of
its total member degree (one-sided overestimate). Edges between distinct
communities collapse into a single superedge carrying the number of parallel
originals as its multiplicity; intra-community edges vanish. Communities that
end up with no superedges are kept as isolated supernodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sketch import CountMinSketch, sketch_add_many, sketch_estimate_many


@dataclass(frozen=True)
class SuperGraph:
    """Weighted contraction: one node per community, deduplicated edges."""

    node_count: int
    edges: np.ndarray         # (s, 2) int64, dense supernode ids, u < v
    weight: np.ndarray        # (node_count,) int64, sketch size estimates
    multiplicity: np.ndarray  # (s,) int64, parallel original edges per superedge
    community_id: np.ndarray  # (node_count,) int64, original label per supernode

    def __post_init__(self):
        if self.edges.ndim != 2 or self.edges.shape[1] != 2:
            raise ValueError("superedges must be an (s, 2) array")
        if len(self.weight) != self.node_count:
            raise ValueError("one weight per supernode required")
        if len(self.multiplicity) != len(self.edges):
            raise ValueError("one multiplicity per superedge required")

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def accumulate_sizes(sketch: CountMinSketch, labels: np.ndarray,
                     degrees: np.ndarray) -> None:
    """Add each node's degree to its community's sketch counter."""
    sketch_add_many(sketch, labels.astype(np.int64),
                    degrees.astype(np.int64))


def contract(g, labels: np.ndarray, sketch: CountMinSketch) -> SuperGraph:
    """Collapse g under `labels` using `sketch` for community weights.

    The sketch must already hold the accumulated degree mass (see
    accumulate_sizes); weights are its per-community estimates.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) != g.node_count:
        raise ValueError("one label per node required")
    comm_ids, dense = np.unique(labels, return_inverse=True)
    k = len(comm_ids)
    weight = sketch_estimate_many(sketch, comm_ids)

    cu = dense[g.edges[:, 0]]
    cv = dense[g.edges[:, 1]]
    cross = cu != cv
    lo = np.minimum(cu[cross], cv[cross])
    hi = np.maximum(cu[cross], cv[cross])
    if len(lo):
        pairs = np.stack([lo, hi], axis=1)
        uniq, mult = np.unique(pairs, axis=0, return_counts=True)
    else:
        uniq = np.empty((0, 2), dtype=np.int64)
        mult = np.empty(0, dtype=np.int64)
    return SuperGraph(node_count=k, edges=uniq.astype(np.int64),
                      weight=weight.astype(np.int64),
                      multiplicity=mult.astype(np.int64),
                      community_id=comm_ids)


def export_supernodes_tsv(sg: SuperGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("supernode\tcommunity\tweight\n")
        for i in range(sg.node_count):
            fh.write(f"{i}\t{int(sg.community_id[i])}\t{int(sg.weight[i])}\n")


def export_superedges_tsv(sg: SuperGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("source\ttarget\tmultiplicity\n")
        for i in range(sg.edge_count):
            fh.write(f"{int(sg.edges[i, 0])}\t{int(sg.edges[i, 1])}"
                     f"\t{int(sg.multiplicity[i])}\n")
