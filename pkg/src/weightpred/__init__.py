"""Weight prediction for partially weighted directed networks.

Equips directed networks whose weights are known only on a training subset
(of origins, terminals, or edges) with a count-based distance, and predicts
the unknown weights with modified kNN and kernel-expansion regressors.
Includes dataset ingestion, fairness/goodness vertex-weight generation,
seeded train/test splitting, and MAE/RMSE evaluation.
"""

from .countmetric import CountMetric, CountProfile, avg_neighbor_weight, band_count, stable_mean
from .errors import DomainError, ParseError, PredictionError, WeightpredError
from .evaluation import (
    EvaluationReport,
    ExperimentConfig,
    ExperimentResult,
    format_tables,
    mae,
    rmse,
    run_experiment,
)
from .fairness import FgScores, compute_fairness_goodness
from .graph import (
    DirectedGraph,
    WeightKind,
    Weighting,
    build_graph,
    neighbors,
    neighbors_of_edge,
    neighbors_of_origin,
    neighbors_of_terminal,
)
from .ingest import (
    DatasetSpec,
    EdgeRecord,
    Snapshot,
    Split,
    SplitPlan,
    build_snapshot,
    collapse_duplicates,
    load_snapshot,
    make_rng,
    make_split,
    parse_edge_list,
    rescale,
    rescale_inverse,
    save_snapshot,
)
from .knn import KnnConfig, KnnModel, KnnNeighborhood, KnnPrediction, knn_neighborhood, predict_weight_knn
from .svm import (
    KernelSpec,
    SvmConfig,
    SvmModel,
    SvmPrediction,
    fit,
    fit_points,
    kernel_eval,
    predict_at,
    predict_weight_svm,
    transfer,
)

__version__ = "0.1.0"

__all__ = [
    "CountMetric",
    "CountProfile",
    "DatasetSpec",
    "DirectedGraph",
    "DomainError",
    "EdgeRecord",
    "EvaluationReport",
    "ExperimentConfig",
    "ExperimentResult",
    "FgScores",
    "KernelSpec",
    "KnnConfig",
    "KnnModel",
    "KnnNeighborhood",
    "KnnPrediction",
    "ParseError",
    "PredictionError",
    "Snapshot",
    "Split",
    "SplitPlan",
    "SvmConfig",
    "SvmModel",
    "SvmPrediction",
    "WeightKind",
    "Weighting",
    "WeightpredError",
    "avg_neighbor_weight",
    "band_count",
    "build_graph",
    "build_snapshot",
    "collapse_duplicates",
    "compute_fairness_goodness",
    "fit",
    "fit_points",
    "format_tables",
    "kernel_eval",
    "knn_neighborhood",
    "load_snapshot",
    "mae",
    "make_rng",
    "make_split",
    "neighbors",
    "neighbors_of_edge",
    "neighbors_of_origin",
    "neighbors_of_terminal",
    "parse_edge_list",
    "predict_at",
    "predict_weight_knn",
    "predict_weight_svm",
    "rescale",
    "rescale_inverse",
    "rmse",
    "run_experiment",
    "save_snapshot",
    "stable_mean",
    "transfer",
]
