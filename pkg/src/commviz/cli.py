"""End-to-end pipeline and command line front end.

`commviz render graph.txt` parses an edge list, detects communities, sizes
them through the sketch, contracts to a supergraph, lays it out, and writes
layout.svg, nodes.tsv, supernodes.tsv, superedges.tsv, hierarchy.tsv and
report.json into the output directory. `--mode full` instead lays out the
original graph (community-colored, constant radius) as the expensive
baseline. `commviz ablate --axis hashes|rounds|threshold` sweeps one knob and
writes a TSV of quality and timing per setting.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .community import (ThresholdSchedule, default_workers, detect_communities,
                        export_hierarchy_tsv)
from .graph import degree_stats, from_edge_array, load_edge_list
from .layout import LayoutParams, layout
from .metrics import community_size_histogram, modularity
from .render import (assign_colors, color_full_graph, export_svg, node_radii,
                     ColorAssignment)
from .sketch import default_cols, sketch_add_many, sketch_new
from .supergraph import (accumulate_sizes, contract, export_superedges_tsv,
                         export_supernodes_tsv)

MIN_RENDER_RADIUS = 0.5


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage


@dataclass
class PipelineConfig:
    input: str
    outdir: str = "out"
    mode: str = "pipeline"          # pipeline | full
    threshold_base: int = 0         # 0 = use the degree mode
    rounds: int = 10
    workers: int | None = None      # None = COMMVIZ_WORKERS or 4
    seed: int = 0
    tie_rule: str = "src-joins-dst"
    interleave: str = "random"
    round_stream: str = "contract"
    sketch_rows: int = 4
    sketch_cols: int = 0            # 0 = scale with edge count
    iterations: int = 100
    full_iterations: int = 500
    gravity: float = 1.0
    repulsion: float = 80.0
    jitter_tolerance: float = 1.0
    theta: float = 0.5
    alpha: float = 1.0
    draw_edges: bool = False

    def __post_init__(self):
        if self.mode not in ("pipeline", "full"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.threshold_base < 0:
            raise ValueError("threshold base must be non-negative")
        if self.rounds < 1:
            raise ValueError("rounds must be positive")
        if self.workers is not None and self.workers < 1:
            raise ValueError("workers must be positive")
        if self.sketch_rows < 1:
            raise ValueError("sketch rows must be positive")
        if self.sketch_cols < 0:
            raise ValueError("sketch cols must be non-negative")
        if self.iterations < 1 or self.full_iterations < 1:
            raise ValueError("iteration counts must be positive")
        if self.gravity <= 0:
            raise ValueError("gravity must be positive")


@dataclass
class Report:
    mode: str
    node_count: int
    edge_count: int
    community_count: int
    supernode_count: int
    superedge_count: int
    modularity: float
    rounds_run: int
    stage_ms: dict = field(default_factory=dict)
    community_sizes: dict = field(default_factory=dict)

    def to_json(self) -> str:
        d = dataclasses.asdict(self)
        d["community_sizes"] = {str(k): v for k, v in
                                sorted(self.community_sizes.items())}
        return json.dumps(d, indent=2, sort_keys=True)


class _StageTimer:
    def __init__(self):
        self.ms: dict[str, float] = {}

    def run(self, name: str, fn):
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as exc:
            raise PipelineStageError(name, exc) from exc
        self.ms[name] = (time.perf_counter() - t0) * 1000.0
        return out


def run_pipeline(config: PipelineConfig):
    """Execute all stages, write artifacts into config.outdir, return Report."""
    timer = _StageTimer()
    os.makedirs(config.outdir, exist_ok=True)
    out = lambda name: os.path.join(config.outdir, name)

    g = timer.run("parse", lambda: load_edge_list(config.input))

    base = config.threshold_base or degree_stats(g).mode_degree
    schedule = ThresholdSchedule(base=base, rounds=config.rounds)
    assignment = timer.run("detect", lambda: detect_communities(
        g, schedule, seed=config.seed, tie_rule=config.tie_rule,
        workers=config.workers, interleave=config.interleave,
        round_stream=config.round_stream))

    cols = config.sketch_cols or default_cols(g.edge_count)
    sketch = sketch_new(config.sketch_rows, cols, seed=config.seed)
    sg = timer.run("contract", lambda: _contract_stage(g, assignment, sketch))

    q = timer.run("modularity", lambda: modularity(g, assignment.label))

    if config.mode == "pipeline":
        params = LayoutParams(iterations=config.iterations,
                              gravity=config.gravity,
                              repulsion=config.repulsion,
                              jitter_tolerance=config.jitter_tolerance,
                              theta=config.theta, seed=config.seed)
        result = timer.run("layout", lambda: layout(sg, params))
        timer.run("render", lambda: _render_supergraph(
            config, g, assignment, sg, result, out))
    else:
        params = LayoutParams(iterations=config.full_iterations,
                              gravity=config.gravity,
                              repulsion=config.repulsion,
                              jitter_tolerance=config.jitter_tolerance,
                              theta=config.theta, seed=config.seed)
        result = timer.run("layout", lambda: layout(g, params))
        timer.run("render", lambda: _render_full(
            config, g, assignment, sg, result, out))

    report = Report(mode=config.mode, node_count=g.node_count,
                    edge_count=g.edge_count,
                    community_count=assignment.community_count,
                    supernode_count=sg.node_count,
                    superedge_count=sg.edge_count, modularity=q,
                    rounds_run=len(assignment.round_history),
                    stage_ms=timer.ms,
                    community_sizes=community_size_histogram(assignment.label))
    with open(out("report.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json() + "\n")
    return report, sg, result


def _contract_stage(g, assignment, sketch):
    accumulate_sizes(sketch, assignment.label, g.degree)
    return contract(g, assignment.label, sketch)


def _render_supergraph(config, g, assignment, sg, result, out):
    colors = assign_colors(sg.weight, alpha=config.alpha)
    radii = node_radii(result.positions, sg.weight)
    edges = sg.edges if config.draw_edges else None
    mult = sg.multiplicity if config.draw_edges else None
    export_svg(out("layout.svg"), result.positions, radii, colors,
               edges=edges, multiplicity=mult)
    export_supernodes_tsv(sg, out("supernodes.tsv"))
    export_superedges_tsv(sg, out("superedges.tsv"))
    export_hierarchy_tsv(assignment, out("hierarchy.tsv"))
    _export_nodes_tsv(out("nodes.tsv"), g, assignment, sg, colors, result)


def _render_full(config, g, assignment, sg, result, out):
    colors = assign_colors(sg.weight, alpha=config.alpha)
    node_class = color_full_graph(assignment.label, sg.community_id, colors)
    full_colors = ColorAssignment(classes=node_class)
    radii = np.full(g.node_count, MIN_RENDER_RADIUS)
    edges = g.edges if config.draw_edges else None
    export_svg(out("layout.svg"), result.positions, radii, full_colors,
               edges=edges)
    export_supernodes_tsv(sg, out("supernodes.tsv"))
    export_superedges_tsv(sg, out("superedges.tsv"))
    export_hierarchy_tsv(assignment, out("hierarchy.tsv"))
    _export_nodes_tsv(out("nodes.tsv"), g, assignment, sg, colors, result,
                      full=True)


def _export_nodes_tsv(path, g, assignment, sg, colors, result, full=False):
    dense = {int(c): i for i, c in enumerate(sg.community_id)}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("node\tcommunity\tsupernode\tclass\tx\ty\n")
        for v in range(g.node_count):
            lab = int(assignment.label[v])
            s = dense[lab]
            k = int(colors.classes[s])
            if full:
                x, y = result.positions[v]
            else:
                x, y = result.positions[s]
            fh.write(f"{v}\t{lab}\t{s}\t{k}\t{x:.3f}\t{y:.3f}\n")


def run_ablation(config: PipelineConfig, axis: str, path=None):
    """Sweep one knob, rerunning detection (and sizing where relevant).

    Axes: hashes (sketch rows), rounds, threshold (base). Returns the rows and
    writes them as TSV when `path` is given.
    """
    g = load_edge_list(config.input)
    base = config.threshold_base or degree_stats(g).mode_degree
    variants = {
        "hashes": [1, 2, 4, 8],
        "rounds": [1, 2, 4, 6, 8, 10],
        "threshold": sorted({2, 3, 4, 8, base}),
    }
    if axis not in variants:
        raise ValueError(f"unknown ablation axis {axis!r}")

    rows = []
    for value in variants[axis]:
        rounds = value if axis == "rounds" else config.rounds
        tbase = value if axis == "threshold" else base
        rows_sketch = value if axis == "hashes" else config.sketch_rows
        t0 = time.perf_counter()
        assignment = detect_communities(
            g, ThresholdSchedule(base=tbase, rounds=rounds), seed=config.seed,
            tie_rule=config.tie_rule, workers=config.workers,
            interleave=config.interleave, round_stream=config.round_stream)
        detect_ms = (time.perf_counter() - t0) * 1000.0
        cols = config.sketch_cols or default_cols(g.edge_count)
        sketch = sketch_new(rows_sketch, cols, seed=config.seed)
        accumulate_sizes(sketch, assignment.label, g.degree)
        sg = contract(g, assignment.label, sketch)
        exact = np.bincount(assignment.label, weights=g.degree,
                            minlength=g.node_count)
        est_err = float(np.mean(sg.weight - exact[sg.community_id]))
        rows.append({
            "axis": axis, "value": value,
            "communities": assignment.community_count,
            "supernodes": sg.node_count, "superedges": sg.edge_count,
            "modularity": modularity(g, assignment.label),
            "mean_weight_overshoot": est_err,
            "detect_ms": detect_ms,
        })
    if path is not None:
        cols_hdr = list(rows[0].keys())
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\t".join(cols_hdr) + "\n")
            for r in rows:
                fh.write("\t".join(_fmt(r[c]) for c in cols_hdr) + "\n")
    return rows


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def warmup_jit():
    """Compile the hot kernels on a toy problem so timings exclude JIT cost."""
    edges = np.array([[0, 1], [1, 2], [2, 0], [2, 3]], dtype=np.int64)
    g = from_edge_array(edges)
    a = detect_communities(g, ThresholdSchedule(base=2, rounds=2), workers=2)
    sketch = sketch_new(2, 16, seed=0)
    sketch_add_many(sketch, a.label, g.degree)
    sg = contract(g, a.label, sketch)
    layout(sg, LayoutParams(iterations=2, theta=0.5))
    layout(g, LayoutParams(iterations=2, theta=0.0))


def _add_common_flags(p: argparse.ArgumentParser):
    p.add_argument("input", help="edge list file (whitespace separated pairs)")
    p.add_argument("--outdir", default="out")
    p.add_argument("--threshold-base", type=int, default=0,
                   help="streaming merge threshold; 0 uses the degree mode")
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--workers", type=int, default=None,
                   help=f"default: $COMMVIZ_WORKERS or {default_workers()}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tie-rule", default="src-joins-dst",
                   choices=["src-joins-dst", "dst-joins-src", "skip"])
    p.add_argument("--interleave", default="random",
                   choices=["random", "roundrobin"])
    p.add_argument("--round-stream", default="contract",
                   choices=["contract", "restream"])
    p.add_argument("--sketch-rows", type=int, default=4)
    p.add_argument("--sketch-cols", type=int, default=0,
                   help="0 scales with edge count")
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--full-iterations", type=int, default=500)
    p.add_argument("--gravity", type=float, default=1.0)
    p.add_argument("--repulsion", type=float, default=80.0)
    p.add_argument("--jitter-tolerance", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--draw-edges", action="store_true")


def _config_from(args: argparse.Namespace, mode: str) -> PipelineConfig:
    return PipelineConfig(
        input=args.input, outdir=args.outdir, mode=mode,
        threshold_base=args.threshold_base, rounds=args.rounds,
        workers=args.workers, seed=args.seed, tie_rule=args.tie_rule,
        interleave=args.interleave, round_stream=args.round_stream,
        sketch_rows=args.sketch_rows, sketch_cols=args.sketch_cols,
        iterations=args.iterations, full_iterations=args.full_iterations,
        gravity=args.gravity, repulsion=args.repulsion,
        jitter_tolerance=args.jitter_tolerance, theta=args.theta,
        alpha=args.alpha, draw_edges=args.draw_edges)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="commviz",
        description="community summarization and layout for large graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="run the pipeline and draw")
    _add_common_flags(p_render)
    p_render.add_argument("--mode", default="pipeline",
                          choices=["pipeline", "full"])

    p_ablate = sub.add_parser("ablate", help="sweep one knob to a TSV")
    _add_common_flags(p_ablate)
    p_ablate.add_argument("--axis", required=True,
                          choices=["hashes", "rounds", "threshold"])

    args = parser.parse_args(argv)
    try:
        if args.command == "render":
            config = _config_from(args, args.mode)
            report, _, _ = run_pipeline(config)
            print(f"{report.mode}: {report.node_count} nodes, "
                  f"{report.community_count} communities, "
                  f"Q={report.modularity:.4f} -> {config.outdir}/layout.svg")
        else:
            config = _config_from(args, "pipeline")
            os.makedirs(config.outdir, exist_ok=True)
            path = os.path.join(config.outdir, f"ablation_{args.axis}.tsv")
            rows = run_ablation(config, args.axis, path)
            print(f"{len(rows)} settings -> {path}")
    except PipelineStageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
