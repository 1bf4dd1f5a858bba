"""Two-group homophily network model.

Closed-form group-degree analytics, seeded graph sampling matching those
expectations, Monte Carlo estimation with standard errors, and parameter
sweeps that emit plot-ready tables, including the critical minority size
(2 + N) / (4 N) below which minority homophily widens the degree gap.
"""

from .graphgen import (
    DEFAULT_MAX_NODES,
    DENSE_MAX_NODES,
    CapacityError,
    GenSpec,
    LabeledGraph,
    empirical_group_degrees,
    generate,
    node_degrees,
    pair_class_counts,
    read_edge_list,
    write_edge_list,
)
from .model import (
    ExpectedStats,
    ModelParams,
    ValidationError,
    critical_minority_size,
    expected_edge_counts,
    expected_group_degrees,
    expected_stats,
    gap_slope,
    gap_slope_integer,
    minority_count,
    structural_gap,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    mc_degree_summary,
    mc_gap,
    mc_gap_slope,
    mc_group_degrees,
    mix_seed,
)
from .sweep import (
    PANELS,
    BudgetExceededError,
    CriticalSizeEstimate,
    FigureOptions,
    NoSignChangeError,
    SlopeRow,
    SweepRow,
    detect_critical_size,
    fig1_dataset,
    sweep,
    write_csv,
    write_json,
    write_table,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CriticalSizeEstimate",
    "BudgetExceededError",
    "DEFAULT_MAX_NODES",
    "DENSE_MAX_NODES",
    "ExpectedStats",
    "FigureOptions",
    "GenSpec",
    "LabeledGraph",
    "McConfig",
    "McEstimate",
    "ModelParams",
    "NoSignChangeError",
    "PANELS",
    "SlopeRow",
    "SweepRow",
    "ValidationError",
    "critical_minority_size",
    "detect_critical_size",
    "empirical_group_degrees",
    "expected_edge_counts",
    "expected_group_degrees",
    "expected_stats",
    "fig1_dataset",
    "gap_slope",
    "gap_slope_integer",
    "generate",
    "mc_degree_summary",
    "mc_gap",
    "mc_gap_slope",
    "mc_group_degrees",
    "minority_count",
    "mix_seed",
    "node_degrees",
    "pair_class_counts",
    "read_edge_list",
    "structural_gap",
    "sweep",
    "write_csv",
    "write_edge_list",
    "write_json",
    "write_table",
]
