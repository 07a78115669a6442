"""MST-based diagnostics for high-dimensional clusterings and their 2-D
embeddings: medoid subtrees, tree-distance stability checks, a crossing-count
separation test, and a path-unwinding projection."""

from .dataset import (
    Clustering,
    Dataset,
    Embedding,
    IngestionError,
    MetaTable,
    global_pca,
    load_session,
)
from .mst import (
    CrossingStatistic,
    DuplicatePointsError,
    GroupSelection,
    WeightedTree,
    build_mst,
    crossing_count,
    medoid_subtree,
    medoids,
    minimal_subtree,
    selection_from_endpoints,
    selection_from_groups,
    simplify_group_subtree,
    simplify_medoid_subtree,
    tree_from_edgelist,
    tree_path,
    tree_to_edgelist,
)
from .rf import (
    DegenerateTreesError,
    RFResult,
    medoid_bipartitions,
    rf_distance,
    stability_experiment,
)
from .separation import (
    DegenerateGroupError,
    GroupDensity,
    NullTheoryProblem,
    PiecewiseDensity,
    TestResult,
    estimate_group_density,
    minimal_crossing_density,
    mst_test,
    simulate_null,
)
from .projection import (
    KDESurface,
    ProjectionConfig,
    ProjectionResult,
    cv_select_lambda,
    kde2d,
    mode_count,
    pca_rcca_project,
    polynomial_design,
)
from .summaries import HeatmapSpec, MetaSummary, heatmap_spec, meta_summary
from .experiments import PowerRow, power_experiment

__version__ = "0.1.0"

__all__ = [
    "Clustering",
    "CrossingStatistic",
    "Dataset",
    "DegenerateGroupError",
    "DegenerateTreesError",
    "DuplicatePointsError",
    "Embedding",
    "GroupDensity",
    "GroupSelection",
    "HeatmapSpec",
    "IngestionError",
    "KDESurface",
    "MetaSummary",
    "MetaTable",
    "NullTheoryProblem",
    "PiecewiseDensity",
    "PowerRow",
    "ProjectionConfig",
    "ProjectionResult",
    "RFResult",
    "TestResult",
    "WeightedTree",
    "build_mst",
    "crossing_count",
    "cv_select_lambda",
    "estimate_group_density",
    "global_pca",
    "heatmap_spec",
    "kde2d",
    "load_session",
    "medoid_bipartitions",
    "medoid_subtree",
    "medoids",
    "meta_summary",
    "minimal_crossing_density",
    "minimal_subtree",
    "mode_count",
    "mst_test",
    "pca_rcca_project",
    "polynomial_design",
    "power_experiment",
    "rf_distance",
    "selection_from_endpoints",
    "selection_from_groups",
    "simplify_group_subtree",
    "simplify_medoid_subtree",
    "simulate_null",
    "stability_experiment",
    "tree_from_edgelist",
    "tree_path",
    "tree_to_edgelist",
]
