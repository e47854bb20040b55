"""srckit: sparse representation classification toolkit.

Subset-regression solvers (greedy pursuit, lasso homotopy, marginal
screening, full regression), the class-masked residual classifier,
class-dominance diagnostics with angle certificates, projection baselines,
synthetic geometry generators, and a reproducible benchmark harness.
"""

from .baselines import LdaModel, Projection, fit_projection, knn_classify, lda_classify
from .classifier import SrcDecision, class_contributions, class_residuals, src_classify
from .diagnostics import (
    AngleScanResult,
    DominanceReport,
    ErrorDecomposition,
    angle_condition_scan,
    check_dominance_certificate,
    decompose_errors,
    dominance_report,
)
from .errors import SrckitError
from .harness import (
    BenchConfig,
    BenchmarkReport,
    SimilarityDataset,
    holdout_split,
    load_dataset,
    run_benchmark,
    save_feature_csv,
)
from .linalg import (
    least_squares_minnorm,
    normalize_columns,
    numerical_rank,
    principal_angle,
)
from .report import emit_report
from .solvers import (
    FullRegressionResult,
    SolverPath,
    StopCriteria,
    StopReason,
    full_regression,
    homotopy_path,
    marginal_path,
    omp_path,
)
from .synth import LabeledDataset, cone_model, subspace_model

__version__ = "0.1.0"

__all__ = [
    "AngleScanResult",
    "BenchConfig",
    "BenchmarkReport",
    "DominanceReport",
    "ErrorDecomposition",
    "FullRegressionResult",
    "LabeledDataset",
    "LdaModel",
    "Projection",
    "SimilarityDataset",
    "SolverPath",
    "SrcDecision",
    "SrckitError",
    "StopCriteria",
    "StopReason",
    "angle_condition_scan",
    "check_dominance_certificate",
    "class_contributions",
    "class_residuals",
    "cone_model",
    "decompose_errors",
    "dominance_report",
    "emit_report",
    "fit_projection",
    "full_regression",
    "holdout_split",
    "homotopy_path",
    "knn_classify",
    "lda_classify",
    "least_squares_minnorm",
    "load_dataset",
    "marginal_path",
    "normalize_columns",
    "numerical_rank",
    "omp_path",
    "principal_angle",
    "run_benchmark",
    "save_feature_csv",
    "src_classify",
    "subspace_model",
]
