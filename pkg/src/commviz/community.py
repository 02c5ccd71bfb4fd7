"""Multi-round streaming community detection over an edge stream.

One round makes a single pass over the stream. For each edge both endpoint
counters are incremented (saturating just past the threshold); if both
incremented counters are still within the threshold, the endpoint with the
smaller counter adopts the other's current label (ties per tie_rule, default
src-joins-dst: the printed equal-degree branch of the source algorithm does
nothing, which would leave the very first edge inert, so the original
streaming rule is used). Labels are last-write pointers; after the pass they
are resolved to representatives, collapsing pointer cycles to the smallest
member id.

Rounds beyond the first stream the contracted supergraph (inter-community
edges relabeled to representatives, duplicates retained in stream order) with
a growing threshold: round i uses min(base^i, cap) where the cap is
max(mode degree, base). Each supernode's counter starts at its member count
minus one, clamped to threshold+1 -- a community of s nodes has already
consumed s-1 merges, so established communities larger than the threshold
stop absorbing while small ones keep merging. Zero-starting counters instead
would let any supernode's first superedge arrival pass the threshold check,
remixing every pair of bridged communities regardless of how settled they
are. Detection stops early when two consecutive rounds produce the identical
partition.

Parallel execution is emulated deterministically: the stream is split into
`workers` contiguous chunks and a seeded schedule interleaves them (uniform
random merge by default, strict round-robin optionally). A single worker
processes the pure stream order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from numba import njit

TIE_SRC_JOINS_DST = 0
TIE_DST_JOINS_SRC = 1
TIE_SKIP = 2
_TIE_CODES = {"src-joins-dst": TIE_SRC_JOINS_DST,
              "dst-joins-src": TIE_DST_JOINS_SRC,
              "skip": TIE_SKIP}

WORKERS_ENV = "COMMVIZ_WORKERS"
DEFAULT_WORKERS = 4


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, DEFAULT_WORKERS)))
    except ValueError:
        return DEFAULT_WORKERS


@dataclass
class CommunityAssignment:
    """Resolved per-node labels plus per-round history for drill-down."""

    label: np.ndarray           # (n,) int64, resolved representative ids
    counter_degree: np.ndarray  # (n,) int64, counters at end of last round
    round_history: list = field(default_factory=list)  # per-round label snapshots

    @property
    def community_count(self) -> int:
        return len(np.unique(self.label))


@dataclass(frozen=True)
class ThresholdSchedule:
    """Threshold base and round count; threshold at round i is base**i.

    A base of 1 would keep the schedule constant forever, so it is replaced
    by 2 at construction.
    """

    base: int
    rounds: int = 10

    def __post_init__(self):
        if self.base < 1:
            raise ValueError("threshold base must be positive")
        if self.rounds < 1:
            raise ValueError("round count must be positive")
        if self.base == 1:
            object.__setattr__(self, "base", 2)

    def threshold(self, i: int) -> int:
        return self.base ** i


def fresh_assignment(n: int) -> CommunityAssignment:
    return CommunityAssignment(label=np.arange(n, dtype=np.int64),
                               counter_degree=np.zeros(n, dtype=np.int64))


@njit(cache=True)
def _scoda_pass(edges, order, threshold, tie_code, deg, lab):
    for k in range(order.shape[0]):
        e = order[k]
        u = edges[e, 0]
        v = edges[e, 1]
        du = deg[u]
        dv = deg[v]
        if du <= threshold:
            du += 1
        if dv <= threshold:
            dv += 1
        deg[u] = du
        deg[v] = dv
        if du <= threshold and dv <= threshold:
            if du < dv:
                lab[u] = lab[v]
            elif dv < du:
                lab[v] = lab[u]
            elif tie_code == 0:
                lab[u] = lab[v]
            elif tie_code == 1:
                lab[v] = lab[u]


@njit(cache=True)
def _resolve_labels(lab):
    """Chase pointer chains to representatives; cycles collapse to their
    smallest member id."""
    n = lab.shape[0]
    out = lab.copy()
    state = np.zeros(n, dtype=np.int8)  # 0 new, 1 on path, 2 resolved
    path = np.empty(n, dtype=np.int64)
    for start in range(n):
        if state[start] == 2:
            continue
        plen = 0
        x = start
        rep = np.int64(-1)
        while True:
            if state[x] == 2:
                rep = out[x]
                break
            if state[x] == 1:
                ci = 0
                while path[ci] != x:
                    ci += 1
                rep = path[ci]
                for t in range(ci + 1, plen):
                    if path[t] < rep:
                        rep = path[t]
                break
            state[x] = 1
            path[plen] = x
            plen += 1
            nxt = out[x]
            if nxt == x:
                rep = x
                break
            x = nxt
        for t in range(plen):
            out[path[t]] = rep
            state[path[t]] = 2
    return out


def make_schedule(m: int, workers: int, seed: int,
                  interleave: str = "random") -> np.ndarray:
    """Edge-index processing order emulating `workers` chunked stream readers.

    Chunks are contiguous; within a chunk order is preserved. "random" merges
    chunks by a seeded uniform interleave, "roundrobin" deals one edge per
    live chunk in turn. One worker returns the identity order.
    """
    if workers <= 1 or m < 2:
        return np.arange(m, dtype=np.int64)
    bounds = np.array([m * w // workers for w in range(workers + 1)],
                      dtype=np.int64)
    if interleave == "roundrobin":
        offsets = np.arange(m, dtype=np.int64)
        chunk = np.searchsorted(bounds, offsets, side="right") - 1
        within = offsets - bounds[chunk]
        return np.lexsort((chunk, within)).astype(np.int64)
    if interleave != "random":
        raise ValueError(f"unknown interleave {interleave!r}")
    rng = np.random.default_rng(seed)
    ptr = bounds[:-1].copy()
    out = np.empty(m, dtype=np.int64)
    live = [w for w in range(workers) if bounds[w] < bounds[w + 1]]
    done = 0
    while live:
        w = live[rng.integers(len(live))]
        out[done] = ptr[w]
        ptr[w] += 1
        done += 1
        if ptr[w] >= bounds[w + 1]:
            live.remove(w)
    return out


def scoda_round(g, a: CommunityAssignment, threshold: int,
                tie_rule: str = "src-joins-dst", workers: int = 1,
                seed: int = 0, interleave: str = "random") -> CommunityAssignment:
    """One streaming pass over g.edges starting from assignment `a`.

    Counters are taken from `a` as given (normally zeroed at round start) and
    never exceed threshold+1 afterwards.
    """
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    if tie_rule not in _TIE_CODES:
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    tie_code = _TIE_CODES[tie_rule]
    deg = a.counter_degree.astype(np.int64).copy()
    lab = a.label.astype(np.int64).copy()
    order = make_schedule(len(g.edges), workers, seed, interleave)
    _scoda_pass(g.edges, order, np.int64(threshold), tie_code, deg, lab)
    resolved = _resolve_labels(lab)
    return CommunityAssignment(label=resolved, counter_degree=deg,
                               round_history=list(a.round_history))


def detect_communities(g, schedule: ThresholdSchedule, seed: int = 0,
                       tie_rule: str = "src-joins-dst",
                       workers: int | None = None,
                       interleave: str = "random",
                       round_stream: str = "contract") -> CommunityAssignment:
    """Run up to schedule.rounds streaming passes with growing thresholds.

    round_stream="contract" streams the current supergraph's edges each round;
    "restream" replays the original edges relabeled to current representatives.
    Early-stops when a round leaves the partition unchanged.
    """
    if g.edge_count == 0:
        raise ValueError("cannot detect communities in an empty graph")
    if round_stream not in ("contract", "restream"):
        raise ValueError(f"unknown round_stream {round_stream!r}")
    if tie_rule not in _TIE_CODES:
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    if workers is None:
        workers = default_workers()
    tie_code = _TIE_CODES[tie_rule]

    n = g.node_count
    degree = g.degree
    nonzero = degree[degree > 0]
    mode_degree = int(np.argmax(np.bincount(nonzero))) if len(nonzero) else 1
    cap = max(mode_degree, schedule.base)

    node_lab = np.arange(n, dtype=np.int64)
    cur_edges = g.edges
    prev = None
    history: list[np.ndarray] = []
    deg = np.zeros(n, dtype=np.int64)

    for i in range(1, schedule.rounds + 1):
        if len(cur_edges) == 0:
            break
        thr = np.int64(min(schedule.threshold(i), cap))
        deg = np.zeros(n, dtype=np.int64)
        if i > 1:
            size = np.bincount(node_lab, minlength=n)
            np.minimum(size - 1, int(thr) + 1, out=deg[:len(size)])
            np.maximum(deg, 0, out=deg)
        lab = np.arange(n, dtype=np.int64)
        order = make_schedule(len(cur_edges), workers, seed + i, interleave)
        _scoda_pass(cur_edges, order, thr, tie_code, deg, lab)
        lab = _resolve_labels(lab)
        node_lab = lab[node_lab]
        history.append(node_lab.copy())
        if prev is not None and np.array_equal(node_lab, prev):
            break
        prev = node_lab.copy()
        if round_stream == "contract":
            cu = lab[cur_edges[:, 0]]
            cv = lab[cur_edges[:, 1]]
        else:
            cu = node_lab[g.edges[:, 0]]
            cv = node_lab[g.edges[:, 1]]
        keep = cu != cv
        cur_edges = np.stack([cu[keep], cv[keep]], axis=1)

    return CommunityAssignment(label=node_lab, counter_degree=deg,
                               round_history=history)


def export_hierarchy_tsv(a: CommunityAssignment, path) -> None:
    """Node id, final label, and one column per detection round."""
    n = len(a.label)
    with open(path, "w", encoding="utf-8") as fh:
        header = ["node", "label"] + [f"round{i + 1}"
                                      for i in range(len(a.round_history))]
        fh.write("\t".join(header) + "\n")
        for v in range(n):
            row = [str(v), str(int(a.label[v]))]
            row += [str(int(h[v])) for h in a.round_history]
            fh.write("\t".join(row) + "\n")
