"""Partition quality measures.

Modularity is computed in O(|E| + |C|) from per-community intra-edge counts
and degree sums; duplicate edges count with multiplicity. The slow quadratic
double-sum form lives in the test suite as an oracle.

The intra-community draw probability is the sequential product
prod_{l=0}^{k-1} (e_CC - l) / (e_C - l): the chance that k draws without
replacement from a community's incident edges all land on intra-community
edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CommunityStats:
    intra_edges: int
    boundary_edges: int

    def __post_init__(self):
        if self.intra_edges < 0 or self.boundary_edges < 0:
            raise ValueError("edge counts must be non-negative")

    @property
    def incident_edges(self) -> int:
        return self.intra_edges + self.boundary_edges


def modularity(g, labels) -> float:
    """Q = sum_c [intra_c/m - (degsum_c/2m)^2] over communities c."""
    labels = np.asarray(getattr(labels, "label", labels))
    m = g.edge_count
    if m == 0:
        raise ValueError("modularity undefined for a graph with no edges")
    uniq, inv = np.unique(labels, return_inverse=True)
    cu = inv[g.edges[:, 0]]
    cv = inv[g.edges[:, 1]]
    intra = np.bincount(cu[cu == cv], minlength=len(uniq))
    degsum = np.bincount(inv, weights=g.degree.astype(np.float64),
                         minlength=len(uniq))
    return float(np.sum(intra / m - (degsum / (2.0 * m)) ** 2))


def community_stats(g, labels, community) -> CommunityStats:
    labels = np.asarray(getattr(labels, "label", labels))
    cu = labels[g.edges[:, 0]]
    cv = labels[g.edges[:, 1]]
    both = (cu == community) & (cv == community)
    either = (cu == community) | (cv == community)
    intra = int(np.sum(both))
    return CommunityStats(intra_edges=intra,
                          boundary_edges=int(np.sum(either)) - intra)


def intra_probability(cs: CommunityStats, k: int) -> float:
    total = cs.incident_edges
    if k > total:
        raise ValueError(f"cannot draw {k} edges from {total} incident edges")
    p = 1.0
    for l in range(k):
        p *= max(cs.intra_edges - l, 0) / (total - l)
    return p


def community_size_histogram(labels) -> dict[int, int]:
    """Map community size -> number of communities of that size."""
    labels = np.asarray(getattr(labels, "label", labels))
    _, counts = np.unique(labels, return_counts=True)
    sizes, freq = np.unique(counts, return_counts=True)
    return {int(s): int(f) for s, f in zip(sizes, freq)}
