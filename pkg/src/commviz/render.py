"""Size-rank coloring and SVG export.

Supernodes are ranked by weight into 11 classes. The smallest communities
that together hold at most alpha/2 of the total weight form class 0 (brown);
the rest split into 10 contiguous ascending groups of equal count, any
remainder going to the largest classes. Radii grow with the square root of
weight so area tracks community size, scaled so the heaviest node's radius is
3 percent of the layout diameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PALETTE = (
    "#b15928",  # 0 brown
    "#cab2d6",  # 1 light purple
    "#6a3d9a",  # 2 purple
    "#fdbf6f",  # 3 light orange
    "#ff7f00",  # 4 orange
    "#fb9a99",  # 5 light red
    "#e31a1c",  # 6 red
    "#b2df8a",  # 7 light green
    "#33a02c",  # 8 green
    "#a6cee3",  # 9 light blue
    "#1f78b4",  # 10 blue
)

CLASS_COUNT = len(PALETTE)
MIN_RADIUS = 0.5
RADIUS_FRACTION = 0.03


@dataclass(frozen=True)
class ColorAssignment:
    classes: np.ndarray  # (n,) int64 in [0, 10]
    palette: tuple = PALETTE

    def color(self, i: int) -> str:
        return self.palette[int(self.classes[i])]


def assign_colors(weights: np.ndarray, alpha: float = 1.0) -> ColorAssignment:
    """Rank weights into the 11 classes described in the module docstring."""
    if not 0 < alpha <= 2:
        raise ValueError("alpha must be in (0, 2]")
    weights = np.asarray(weights, dtype=np.float64)
    n = len(weights)
    if n == 0:
        raise ValueError("cannot color an empty weight vector")
    order = np.argsort(weights, kind="stable")
    csum = np.cumsum(weights[order])
    total = csum[-1]
    brown = int(np.searchsorted(csum, alpha / 2 * total, side="right"))
    classes = np.zeros(n, dtype=np.int64)
    rest = n - brown
    if rest > 0:
        counts = np.full(10, rest // 10, dtype=np.int64)
        for j in range(rest % 10):
            counts[9 - j] += 1
        group = np.repeat(np.arange(1, 11, dtype=np.int64), counts)
        classes[order[brown:]] = group
    return ColorAssignment(classes=classes)


def radius_scale(positions: np.ndarray, weights: np.ndarray) -> float:
    span = positions.max(axis=0) - positions.min(axis=0)
    diameter = float(np.hypot(span[0], span[1]))
    max_w = float(np.max(weights))
    if diameter <= 0 or max_w <= 0:
        return 1.0
    return RADIUS_FRACTION * diameter / np.sqrt(max_w)


def node_radii(positions: np.ndarray, weights: np.ndarray) -> np.ndarray:
    s = radius_scale(positions, weights)
    return np.maximum(s * np.sqrt(np.asarray(weights, dtype=np.float64)),
                      MIN_RADIUS)


def color_full_graph(labels: np.ndarray, community_id: np.ndarray,
                     colors: ColorAssignment) -> np.ndarray:
    """Map every original node to its community's color class."""
    lookup = {int(c): int(k) for c, k in zip(community_id, colors.classes)}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        k = lookup.get(int(lab))
        if k is None:
            raise ValueError(f"node {i} has label {int(lab)} with no color class")
        out[i] = k
    return out


def export_svg(path, positions: np.ndarray, radii: np.ndarray,
               colors: ColorAssignment, edges: np.ndarray | None = None,
               multiplicity: np.ndarray | None = None,
               margin: float = 0.05) -> None:
    """Write a deterministic SVG: edges under nodes, nodes painted in class
    order so the largest classes end up on top. All floats use 3 decimals."""
    positions = np.asarray(positions, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    n = len(positions)
    if len(radii) != n or len(colors.classes) != n:
        raise ValueError("positions, radii and classes must align")

    lo = positions.min(axis=0) - radii.max()
    hi = positions.max(axis=0) + radii.max()
    span = np.maximum(hi - lo, 1e-6)
    pad = margin * span
    x0, y0 = lo - pad
    w, h = span + 2 * pad

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'viewBox="{x0:.3f} {y0:.3f} {w:.3f} {h:.3f}">']
    if edges is not None and len(edges):
        if multiplicity is None:
            multiplicity = np.ones(len(edges))
        top = float(np.max(multiplicity))
        for e in range(len(edges)):
            u, v = int(edges[e, 0]), int(edges[e, 1])
            op = 0.1 + 0.6 * float(multiplicity[e]) / top
            lines.append(
                f'<line x1="{positions[u, 0]:.3f}" y1="{positions[u, 1]:.3f}" '
                f'x2="{positions[v, 0]:.3f}" y2="{positions[v, 1]:.3f}" '
                f'stroke="#999999" stroke-opacity="{op:.3f}" stroke-width="0.5"/>')
    draw_order = np.lexsort((np.arange(n), colors.classes))
    for i in draw_order:
        lines.append(
            f'<circle cx="{positions[i, 0]:.3f}" cy="{positions[i, 1]:.3f}" '
            f'r="{radii[i]:.3f}" fill="{colors.color(i)}"/>')
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
