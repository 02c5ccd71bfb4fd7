import os
import tempfile

import numpy as np
import pytest

from commviz import (ThresholdSchedule, default_workers, detect_communities,
                     export_hierarchy_tsv, from_edge_array, make_schedule,
                     scoda_round)
from commviz.community import _resolve_labels, fresh_assignment
from conftest import exact_recovered, k5, planted_graph, two_k4_bridge

hyp = pytest.importorskip("hypothesis")
from hypothesis import given, settings, strategies as st


def test_threshold_schedule_validates_and_grows():
    s = ThresholdSchedule(base=3, rounds=5)
    assert [s.threshold(i) for i in (1, 2, 3)] == [3, 9, 27]
    with pytest.raises(ValueError):
        ThresholdSchedule(base=0)
    with pytest.raises(ValueError):
        ThresholdSchedule(base=2, rounds=0)


def test_threshold_base_one_bumped_to_two():
    assert ThresholdSchedule(base=1).base == 2


def test_resolve_follows_chains():
    lab = np.array([1, 2, 3, 3, 0], dtype=np.int64)
    out = _resolve_labels(lab)
    # 0 -> 1 -> 2 -> 3 (self), 4 -> 0's chain
    assert out.tolist() == [3, 3, 3, 3, 3]


def test_resolve_collapses_cycles_to_min():
    lab = np.array([1, 2, 0, 1, 4], dtype=np.int64)
    out = _resolve_labels(lab)
    assert out.tolist() == [0, 0, 0, 0, 4]


def test_schedule_single_worker_is_identity():
    assert make_schedule(7, 1, 0).tolist() == list(range(7))


def test_schedule_is_permutation():
    for mode in ("random", "roundrobin"):
        order = make_schedule(13, 4, 5, mode)
        assert sorted(order.tolist()) == list(range(13))


def test_schedule_roundrobin_deals_chunk_heads():
    order = make_schedule(8, 4, 0, "roundrobin")
    # chunks [0,1], [2,3], [4,5], [6,7] dealt one at a time
    assert order.tolist() == [0, 2, 4, 6, 1, 3, 5, 7]


def test_schedule_preserves_chunk_order():
    order = make_schedule(40, 4, 9, "random")
    for w in range(4):
        lo, hi = 10 * w, 10 * (w + 1)
        sub = [e for e in order if lo <= e < hi]
        assert sub == list(range(lo, hi))


def test_schedule_deterministic_per_seed():
    a = make_schedule(30, 3, 7, "random")
    b = make_schedule(30, 3, 7, "random")
    c = make_schedule(30, 3, 8, "random")
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_schedule_rejects_unknown_mode():
    with pytest.raises(ValueError):
        make_schedule(4, 2, 0, "zigzag")


def test_single_round_first_edge_merges():
    g = from_edge_array(np.array([[0, 1]], dtype=np.int64))
    a = scoda_round(g, fresh_assignment(2), threshold=1)
    assert a.label[0] == a.label[1]
    assert a.counter_degree.tolist() == [1, 1]


def test_counters_saturate_just_past_threshold():
    edges = np.array([[0, 1]] * 6, dtype=np.int64)
    g = from_edge_array(edges)
    a = scoda_round(g, fresh_assignment(2), threshold=2)
    assert a.counter_degree.tolist() == [3, 3]


def test_tie_rules():
    g = from_edge_array(np.array([[0, 1]], dtype=np.int64))
    a = scoda_round(g, fresh_assignment(2), threshold=1, tie_rule="src-joins-dst")
    assert a.label.tolist() == [1, 1]
    a = scoda_round(g, fresh_assignment(2), threshold=1, tie_rule="dst-joins-src")
    assert a.label.tolist() == [0, 0]
    a = scoda_round(g, fresh_assignment(2), threshold=1, tie_rule="skip")
    assert a.label.tolist() == [0, 1]


def test_seeded_counters_respected():
    g = from_edge_array(np.array([[0, 1]], dtype=np.int64))
    a = fresh_assignment(2)
    a.counter_degree[0] = 5
    out = scoda_round(g, a, threshold=2)
    # node 0 is already past the threshold, so no merge happens
    assert out.label.tolist() == [0, 1]


def test_two_cliques_with_late_bridge_stay_apart():
    g = two_k4_bridge()
    a = detect_communities(g, ThresholdSchedule(base=2, rounds=10),
                           seed=0, workers=1)
    labels = a.label
    assert len(np.unique(labels)) == 2
    assert len(np.unique(labels[:4])) == 1
    assert len(np.unique(labels[4:])) == 1


def test_k5_collapses_fully():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        g = k5()
        shuffled = g.edges[rng.permutation(len(g.edges))]
        g2 = from_edge_array(shuffled, node_count=5)
        a = detect_communities(g2, ThresholdSchedule(base=2, rounds=10),
                               seed=seed, workers=1)
        assert a.community_count == 1
        assert len(a.round_history) <= 3


def test_disjoint_edges_pair_up():
    g = from_edge_array(np.array([[0, 1], [2, 3], [4, 5]], dtype=np.int64))
    a = detect_communities(g, ThresholdSchedule(base=2), workers=1)
    assert a.community_count == 3
    for u, v in g.edges:
        assert a.label[u] == a.label[v]


def test_established_community_resists_single_bridge():
    # one K8 fully merged in round 1, a pendant pair attached by one bridge:
    # by round 2 the K8's supernode counter starts past the threshold
    edges = [(i, j) for i in range(8) for j in range(i + 1, 8)]
    edges += [(8, 9), (0, 8)]
    g = from_edge_array(np.array(edges, dtype=np.int64))
    a = detect_communities(g, ThresholdSchedule(base=2, rounds=10),
                           seed=0, workers=1)
    assert a.label[8] == a.label[9]
    assert a.label[0] != a.label[8]
    assert len(np.unique(a.label[:8])) == 1


def test_planted_sequential_recovery():
    for seed in range(5):
        g = planted_graph(seed)
        a = detect_communities(g, ThresholdSchedule(base=2, rounds=10),
                               seed=100 + seed, workers=1)
        assert exact_recovered(a.label) >= 7


def test_planted_parallel_recovery():
    # the interleave perturbs the stream, so judge over several seeds
    scores = []
    for s in range(1, 6):
        g = planted_graph(s)
        a = detect_communities(g, ThresholdSchedule(base=2, rounds=10),
                               seed=1000 + s, workers=4, interleave="random")
        scores.append(exact_recovered(a.label))
    assert sum(sc >= 7 for sc in scores) >= 4


def test_restream_mode_runs():
    g = planted_graph(1)
    a = detect_communities(g, ThresholdSchedule(base=2, rounds=10),
                           seed=7, workers=1, round_stream="restream")
    assert a.community_count >= 8
    assert exact_recovered(a.label) >= 6


def test_early_stop_records_fewer_rounds():
    g = two_k4_bridge()
    a = detect_communities(g, ThresholdSchedule(base=2, rounds=10),
                           seed=0, workers=1)
    assert len(a.round_history) < 10


def test_detect_rejects_bad_args():
    g = two_k4_bridge()
    with pytest.raises(ValueError):
        detect_communities(g, ThresholdSchedule(base=2), round_stream="bad")
    with pytest.raises(ValueError):
        detect_communities(g, ThresholdSchedule(base=2), tie_rule="nope")
    empty = from_edge_array(np.empty((0, 2), dtype=np.int64), node_count=2)
    with pytest.raises(ValueError):
        detect_communities(empty, ThresholdSchedule(base=2))


def test_workers_env_default(monkeypatch):
    monkeypatch.setenv("COMMVIZ_WORKERS", "2")
    assert default_workers() == 2
    monkeypatch.setenv("COMMVIZ_WORKERS", "junk")
    assert default_workers() == 4
    monkeypatch.delenv("COMMVIZ_WORKERS")
    assert default_workers() == 4


def test_hierarchy_export():
    g = two_k4_bridge()
    a = detect_communities(g, ThresholdSchedule(base=2, rounds=10),
                           seed=0, workers=1)
    with tempfile.TemporaryDirectory() as td:
        p = os.path.join(td, "h.tsv")
        export_hierarchy_tsv(a, p)
        lines = open(p).read().strip().split("\n")
    header = lines[0].split("\t")
    assert header[:2] == ["node", "label"]
    assert len(header) == 2 + len(a.round_history)
    assert len(lines) == 1 + g.node_count
    row0 = lines[1].split("\t")
    assert int(row0[1]) == int(a.label[0])


@given(st.integers(0, 500), st.integers(1, 6),
       st.sampled_from(["random", "roundrobin"]))
@settings(max_examples=60, deadline=None)
def test_schedule_always_permutes(seed, workers, mode):
    m = 1 + seed % 37
    order = make_schedule(m, workers, seed, mode)
    assert sorted(order.tolist()) == list(range(m))


@given(st.integers(0, 300))
@settings(max_examples=40, deadline=None)
def test_labels_are_class_representatives(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 40))
    m = int(rng.integers(3, 80))
    edges = []
    while len(edges) < m:
        u, v = rng.integers(0, n, size=2)
        if u != v:
            edges.append((int(u), int(v)))
    g = from_edge_array(np.array(edges, dtype=np.int64), node_count=n)
    a = detect_communities(g, ThresholdSchedule(base=2, rounds=4),
                           seed=seed, workers=int(rng.integers(1, 5)))
    # every label is the id of one of its own members
    for lab in np.unique(a.label):
        members = np.flatnonzero(a.label == lab)
        assert lab in members
