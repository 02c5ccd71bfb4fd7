import numpy as np

from commviz import from_edge_array

_CRITERIA = {}


def record_criterion(num, status, detail=""):
    """status: True (pass), False (fail), or "skip"."""
    _CRITERIA[num] = (status, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        status, detail = _CRITERIA[num]
        word = "SKIP" if status == "skip" else ("PASS" if status else "FAIL")
        terminalreporter.write_line(f"CRITERION {num:2d} {word}  {detail}")


def planted_graph(seed, cliques=8, size=16, bridges=8):
    """Cliques streamed intra-edges first (nested order), bridges appended
    last, matching streams where communities are locally dense prefixes."""
    rng = np.random.default_rng(seed)
    edges = []
    for c in range(cliques):
        base = c * size
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j))
    for _ in range(bridges):
        a, b = rng.choice(cliques, size=2, replace=False)
        u = a * size + rng.integers(size)
        v = b * size + rng.integers(size)
        edges.append((int(u), int(v)))
    return from_edge_array(np.array(edges, dtype=np.int64))


def planted_labels(cliques=8, size=16):
    return np.repeat(np.arange(cliques, dtype=np.int64), size) * size


def exact_recovered(labels, cliques=8, size=16):
    """Number of cliques whose members share one label used by nobody else."""
    n = 0
    for c in range(cliques):
        member = labels[c * size:(c + 1) * size]
        if len(np.unique(member)) == 1 and np.sum(labels == member[0]) == size:
            n += 1
    return n


def two_triangles():
    # 0-1-2 triangle, 3-4-5 triangle, bridge 2-3
    return from_edge_array(np.array(
        [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5], [2, 3]],
        dtype=np.int64))


def two_k4_bridge():
    # two K4s with the bridge streamed last
    edges = []
    for base in (0, 4):
        for i in range(4):
            for j in range(i + 1, 4):
                edges.append((base + i, base + j))
    edges.append((0, 4))
    return from_edge_array(np.array(edges, dtype=np.int64))


def k5():
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    return from_edge_array(np.array(edges, dtype=np.int64))
