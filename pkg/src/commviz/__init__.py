"""Streaming community summarization and force-directed drawing."""

from .community import (CommunityAssignment, ThresholdSchedule,
                        default_workers, detect_communities,
                        export_hierarchy_tsv, make_schedule, scoda_round)
from .graph import (DegreeStats, Graph, ParseError, degree_stats,
                    from_edge_array, load_edge_list, parse_edge_list,
                    write_edge_list)
from .layout import (LayoutError, LayoutParams, LayoutResult, init_positions,
                     layout, repulsion_forces)
from .metrics import (CommunityStats, community_size_histogram,
                      community_stats, intra_probability, modularity)
from .render import (CLASS_COUNT, PALETTE, ColorAssignment, assign_colors,
                     color_full_graph, export_svg, node_radii, radius_scale)
from .sketch import (CountMinSketch, default_cols, dump_tsv, sketch_add,
                     sketch_add_many, sketch_estimate, sketch_estimate_many,
                     sketch_new)
from .supergraph import (SuperGraph, accumulate_sizes, contract,
                         export_superedges_tsv, export_supernodes_tsv)
from .cli import (PipelineConfig, PipelineStageError, Report, run_ablation,
                  run_pipeline, warmup_jit)

__version__ = "0.1.0"

__all__ = [
    "CLASS_COUNT", "ColorAssignment", "CommunityAssignment", "CommunityStats",
    "CountMinSketch", "DegreeStats", "Graph", "LayoutError", "LayoutParams",
    "LayoutResult", "PALETTE", "ParseError", "PipelineConfig",
    "PipelineStageError", "Report", "SuperGraph", "ThresholdSchedule",
    "accumulate_sizes", "assign_colors", "color_full_graph",
    "community_size_histogram", "community_stats", "contract", "default_cols",
    "default_workers", "degree_stats", "detect_communities", "dump_tsv",
    "export_hierarchy_tsv", "export_superedges_tsv", "export_supernodes_tsv",
    "export_svg", "from_edge_array", "init_positions", "intra_probability",
    "layout", "load_edge_list", "make_schedule", "modularity", "node_radii",
    "parse_edge_list", "radius_scale", "repulsion_forces", "run_ablation",
    "run_pipeline", "scoda_round", "sketch_add", "sketch_add_many",
    "sketch_estimate", "sketch_estimate_many", "sketch_new", "warmup_jit",
    "write_edge_list",
]
