"""Force-directed layout with Barnes-Hut approximated repulsion.

Forces per node i follow the degree-weighted linear-attraction model:
repulsion k_r * m_i * m_j / d from every other node, attraction
w_e * (pos_j - pos_i) along every incident edge, gravity -g * m_i * pos_i
toward the origin. Supergraph layouts use the community weight as mass
(clamped to at least 1); full-graph layouts use degree + 1.

Repulsion is approximated with a quadtree: a cell of side s at distance d is
treated as its center of mass when s/d < theta. theta=0 switches to the exact
pairwise sum. Coincident points are separated by a small deterministic jitter
so forces stay finite.

The step size adapts per iteration: the global speed chases
jitter_tolerance * (total traction / total swing), never growing more than
1.5x per step, and each node moves by force * speed / (1 + sqrt(speed *
swing_i)), clamped to max_step units. Swing is the mass-weighted force change
between iterations, traction the mass-weighted average force.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit, prange

MAX_DEPTH = 40
COINCIDE_EPS = 1e-4
_TWO_PI = 6.283185307179586

_SPEED_FORMS = ("product", "sum")
_ATTRACTION_FORMS = ("canonical", "reversed")


class LayoutError(RuntimeError):
    pass


@dataclass(frozen=True)
class LayoutParams:
    iterations: int = 100
    gravity: float = 1.0
    repulsion: float = 80.0
    jitter_tolerance: float = 1.0
    theta: float = 0.5
    max_step: float = 10.0
    speed_form: str = "product"
    attraction_form: str = "canonical"
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.gravity < 0:
            raise ValueError("gravity must be non-negative")
        if self.repulsion <= 0:
            raise ValueError("repulsion strength must be positive")
        if self.jitter_tolerance <= 0:
            raise ValueError("jitter tolerance must be positive")
        if self.theta < 0:
            raise ValueError("theta must be non-negative")
        if self.max_step <= 0:
            raise ValueError("max step must be positive")
        if self.speed_form not in _SPEED_FORMS:
            raise ValueError(f"unknown speed form {self.speed_form!r}")
        if self.attraction_form not in _ATTRACTION_FORMS:
            raise ValueError(f"unknown attraction form {self.attraction_form!r}")


@dataclass
class LayoutResult:
    positions: np.ndarray     # (n, 2) float64
    displacement: np.ndarray  # (iterations,) max clamped step per iteration
    iterations: int


def init_positions(n: int, seed: int = 0) -> np.ndarray:
    """Uniform positions in an origin-centered square of side sqrt(n)."""
    side = max(np.sqrt(n), 1.0)
    rng = np.random.default_rng(seed)
    return rng.uniform(-side / 2, side / 2, size=(n, 2))


@njit(cache=True, inline="always")
def _separation(dx, dy, a, b):
    """Separation vector and distance; coincident points get a deterministic
    jitter direction keyed by the pair so forces stay finite."""
    d2 = dx * dx + dy * dy
    if d2 >= COINCIDE_EPS * COINCIDE_EPS:
        return dx, dy, np.sqrt(d2)
    h = (a * np.int64(2654435761) + b * np.int64(40503)) % np.int64(65536)
    ang = _TWO_PI * (np.float64(h) / 65536.0)
    return COINCIDE_EPS * np.cos(ang), COINCIDE_EPS * np.sin(ang), COINCIDE_EPS


@njit(cache=True)
def _build_tree(pos, mass, cap):
    """Insert all bodies into a flat-array quadtree.

    Cells hold at most one body; once the depth cap is hit the cell becomes an
    aggregate holding every remaining (near-)coincident body. Returns -1 as
    the first element when `cap` cells were not enough.
    """
    n = pos.shape[0]
    children = np.full((cap, 4), -1, dtype=np.int64)
    kind = np.zeros(cap, dtype=np.int8)  # 0 empty, 1 single, 2 internal, 3 aggregate
    cmass = np.zeros(cap, dtype=np.float64)
    csumx = np.zeros(cap, dtype=np.float64)
    csumy = np.zeros(cap, dtype=np.float64)
    ccount = np.zeros(cap, dtype=np.int64)
    cx = np.zeros(cap, dtype=np.float64)
    cy = np.zeros(cap, dtype=np.float64)
    chalf = np.zeros(cap, dtype=np.float64)
    leaf_body = np.full(cap, -1, dtype=np.int64)
    body_cell = np.full(n, -1, dtype=np.int64)

    minx = pos[0, 0]
    maxx = pos[0, 0]
    miny = pos[0, 1]
    maxy = pos[0, 1]
    for i in range(1, n):
        if pos[i, 0] < minx:
            minx = pos[i, 0]
        if pos[i, 0] > maxx:
            maxx = pos[i, 0]
        if pos[i, 1] < miny:
            miny = pos[i, 1]
        if pos[i, 1] > maxy:
            maxy = pos[i, 1]
    half = 0.5 * max(maxx - minx, maxy - miny)
    if half <= 0.0:
        half = 1e-6
    half *= 1.0000001
    cx[0] = 0.5 * (minx + maxx)
    cy[0] = 0.5 * (miny + maxy)
    chalf[0] = half
    used = np.int64(1)

    for b in range(n):
        xb = pos[b, 0]
        yb = pos[b, 1]
        mb = mass[b]
        cur = np.int64(0)
        depth = 0
        while True:
            cmass[cur] += mb
            csumx[cur] += mb * xb
            csumy[cur] += mb * yb
            ccount[cur] += 1
            k = kind[cur]
            if k == 0:
                kind[cur] = 1
                leaf_body[cur] = b
                body_cell[b] = cur
                break
            if k == 3:
                body_cell[b] = cur
                break
            if k == 1:
                if depth >= MAX_DEPTH:
                    kind[cur] = 3
                    body_cell[b] = cur
                    break
                e = leaf_body[cur]
                kind[cur] = 2
                leaf_body[cur] = -1
                if used >= cap:
                    return (np.int64(-1), children, kind, cmass, csumx, csumy,
                            ccount, cx, cy, chalf, leaf_body, body_cell)
                q = 0
                if pos[e, 0] >= cx[cur]:
                    q += 1
                if pos[e, 1] >= cy[cur]:
                    q += 2
                child = used
                used += 1
                children[cur, q] = child
                h = 0.5 * chalf[cur]
                cx[child] = cx[cur] + (h if q & 1 else -h)
                cy[child] = cy[cur] + (h if q & 2 else -h)
                chalf[child] = h
                kind[child] = 1
                leaf_body[child] = e
                body_cell[e] = child
                cmass[child] = mass[e]
                csumx[child] = mass[e] * pos[e, 0]
                csumy[child] = mass[e] * pos[e, 1]
                ccount[child] = 1
                k = 2
            q = 0
            if xb >= cx[cur]:
                q += 1
            if yb >= cy[cur]:
                q += 2
            nxt = children[cur, q]
            if nxt == -1:
                if used >= cap:
                    return (np.int64(-1), children, kind, cmass, csumx, csumy,
                            ccount, cx, cy, chalf, leaf_body, body_cell)
                child = used
                used += 1
                children[cur, q] = child
                h = 0.5 * chalf[cur]
                cx[child] = cx[cur] + (h if q & 1 else -h)
                cy[child] = cy[cur] + (h if q & 2 else -h)
                chalf[child] = h
                nxt = child
            cur = nxt
            depth += 1
    return (used, children, kind, cmass, csumx, csumy, ccount, cx, cy, chalf,
            leaf_body, body_cell)


@njit(cache=True, parallel=True)
def _repulsion_bh(pos, mass, kr, theta, children, kind, cmass, csumx, csumy,
                  ccount, chalf, leaf_body, body_cell):
    n = pos.shape[0]
    out = np.zeros((n, 2), dtype=np.float64)
    for i in prange(n):
        xi = pos[i, 0]
        yi = pos[i, 1]
        mi = mass[i]
        fx = 0.0
        fy = 0.0
        stack = np.empty(4 * MAX_DEPTH + 8, dtype=np.int64)
        stack[0] = 0
        sp = 1
        while sp > 0:
            sp -= 1
            c = stack[sp]
            if ccount[c] == 0:
                continue
            k = kind[c]
            if k == 1:
                j = leaf_body[c]
                if j == i:
                    continue
                dx, dy, d = _separation(xi - pos[j, 0], yi - pos[j, 1], i, j)
                f = kr * mi * mass[j] / (d * d)
                fx += f * dx
                fy += f * dy
                continue
            mc = cmass[c]
            mx = csumx[c]
            my = csumy[c]
            if k == 3 and body_cell[i] == c:
                mc -= mi
                mx -= mi * xi
                my -= mi * yi
                if mc <= 0.0:
                    continue
            dx = xi - mx / mc
            dy = yi - my / mc
            d2 = dx * dx + dy * dy
            side = 2.0 * chalf[c]
            if k == 3 or side * side < theta * theta * d2:
                dx, dy, d = _separation(dx, dy, i, np.int64(n) + c)
                f = kr * mi * mc / (d * d)
                fx += f * dx
                fy += f * dy
            else:
                for q in range(4):
                    ch = children[c, q]
                    if ch != -1:
                        stack[sp] = ch
                        sp += 1
        out[i, 0] = fx
        out[i, 1] = fy
    return out


@njit(cache=True, parallel=True)
def _repulsion_exact(pos, mass, kr):
    n = pos.shape[0]
    out = np.zeros((n, 2), dtype=np.float64)
    for i in prange(n):
        fx = 0.0
        fy = 0.0
        for j in range(n):
            if j == i:
                continue
            dx, dy, d = _separation(pos[i, 0] - pos[j, 0],
                                    pos[i, 1] - pos[j, 1], i, j)
            f = kr * mass[i] * mass[j] / (d * d)
            fx += f * dx
            fy += f * dy
        out[i, 0] = fx
        out[i, 1] = fy
    return out


@njit(cache=True)
def _attraction(pos, edges, weight, sign, out):
    for e in range(edges.shape[0]):
        u = edges[e, 0]
        v = edges[e, 1]
        dx = pos[v, 0] - pos[u, 0]
        dy = pos[v, 1] - pos[u, 1]
        w = weight[e] * sign
        out[u, 0] += w * dx
        out[u, 1] += w * dy
        out[v, 0] -= w * dx
        out[v, 1] -= w * dy


def gravity_forces(pos: np.ndarray, mass: np.ndarray, gravity: float) -> np.ndarray:
    """Linear pull toward the origin: F = -g * m * pos."""
    return -gravity * np.asarray(mass, dtype=np.float64)[:, None] * pos


def repulsion_forces(pos: np.ndarray, mass: np.ndarray, repulsion: float = 80.0,
                     theta: float = 0.5) -> np.ndarray:
    """Per-node repulsive force vectors; theta=0 computes the exact sum."""
    pos = np.ascontiguousarray(pos, dtype=np.float64)
    mass = np.ascontiguousarray(mass, dtype=np.float64)
    if theta <= 0:
        return _repulsion_exact(pos, mass, repulsion)
    cap = max(256, 4 * len(pos))
    while True:
        tree = _build_tree(pos, mass, cap)
        if tree[0] != -1:
            break
        cap *= 2
    (_, children, kind, cmass, csumx, csumy, ccount, _, _, chalf,
     leaf_body, body_cell) = tree
    return _repulsion_bh(pos, mass, repulsion, theta, children, kind, cmass,
                         csumx, csumy, ccount, chalf, leaf_body, body_cell)


def _masses_and_edges(obj):
    if hasattr(obj, "weight"):
        mass = np.maximum(obj.weight, 1).astype(np.float64)
        edge_weight = obj.multiplicity.astype(np.float64)
    else:
        mass = (obj.degree + 1).astype(np.float64)
        edge_weight = np.ones(len(obj.edges), dtype=np.float64)
    return mass, obj.edges.astype(np.int64), edge_weight


def layout(obj, params: LayoutParams | None = None,
           positions: np.ndarray | None = None) -> LayoutResult:
    """Iterate the force model on a supergraph or a plain graph.

    `positions` overrides the seeded square initialization. The result records
    the largest clamped per-node step of every iteration.
    """
    if params is None:
        params = LayoutParams()
    mass, edges, edge_weight = _masses_and_edges(obj)
    n = obj.node_count
    if positions is None:
        pos = init_positions(n, params.seed)
    else:
        pos = np.array(positions, dtype=np.float64)
        if pos.shape != (n, 2):
            raise ValueError("positions must be an (n, 2) array")
    if n == 1:
        return LayoutResult(positions=pos, displacement=np.zeros(params.iterations),
                            iterations=params.iterations)

    sign = 1.0 if params.attraction_form == "canonical" else -1.0
    prev_force = np.zeros((n, 2), dtype=np.float64)
    speed = 1.0
    disp_hist = np.zeros(params.iterations, dtype=np.float64)

    for it in range(params.iterations):
        force = repulsion_forces(pos, mass, params.repulsion, params.theta)
        _attraction(pos, edges, edge_weight, sign, force)
        if params.gravity > 0:
            force += gravity_forces(pos, mass, params.gravity)

        diff = np.hypot(force[:, 0] - prev_force[:, 0],
                        force[:, 1] - prev_force[:, 1])
        tot = np.hypot(force[:, 0] + prev_force[:, 0],
                       force[:, 1] + prev_force[:, 1])
        swing = mass * diff
        traction = mass * tot / 2.0
        total_swing = swing.sum()
        if total_swing > 0:
            target = params.jitter_tolerance * traction.sum() / total_swing
            speed = min(target, 1.5 * speed)

        if params.speed_form == "product":
            local = speed / (1.0 + np.sqrt(speed * swing))
        else:
            local = speed / (1.0 + np.sqrt(speed + swing))
        disp = force * local[:, None]
        norms = np.hypot(disp[:, 0], disp[:, 1])
        over = norms > params.max_step
        if over.any():
            disp[over] *= (params.max_step / norms[over])[:, None]
            norms[over] = params.max_step
        pos = pos + disp
        if not np.isfinite(pos).all():
            raise LayoutError(f"non-finite positions at iteration {it + 1}; "
                              "reduce speed or check input weights")
        disp_hist[it] = norms.max()
        prev_force = force

    return LayoutResult(positions=pos, displacement=disp_hist,
                        iterations=params.iterations)
