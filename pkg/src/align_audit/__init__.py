"""align-audit: does a trained classifier weight features the way the data
itself does?

The package computes standardized mean differences between outcome groups,
trains a decision tree and a small neural network on the same table, reads
importances off the tree and Shapley attributions off the network, and
reports rank correlations between the data-level and model-level orderings.
"""

__version__ = "0.1.0"

from .alignment import (AlignmentReport, Ranking, agreement_strength,
                        build_alignment_report, make_ranking, spearman_rho,
                        to_ranks)
from .audit import AuditConfig, AuditResult, run_audit
from .data import (Dataset, RawTable, Standardizer, build_schema, encode,
                   impute, load_csv, standardize, train_test_split)
from .effect_size import EffectSizeTable, GroupStats, group_stats, pooled_std, smd
from .exceptions import (AuditError, ConfigError, DataError, ExplanationError,
                         TrainingError)
from .kernel_shap import (AttributionMatrix, KernelShapExplainer, ShapConfig,
                          aggregate_importance, exact_shapley,
                          masked_prediction, sample_background,
                          shapley_kernel_weight)
from .mlp import MlpBinaryClassifier, numerical_gradient_check
from .tree import EntropyTreeClassifier, TreeNode, compute_importances, entropy

__all__ = [
    "AlignmentReport", "Ranking", "agreement_strength",
    "build_alignment_report", "make_ranking", "spearman_rho", "to_ranks",
    "AuditConfig", "AuditResult", "run_audit",
    "Dataset", "RawTable", "Standardizer", "build_schema", "encode",
    "impute", "load_csv", "standardize", "train_test_split",
    "EffectSizeTable", "GroupStats", "group_stats", "pooled_std", "smd",
    "AuditError", "ConfigError", "DataError", "ExplanationError",
    "TrainingError",
    "AttributionMatrix", "KernelShapExplainer", "ShapConfig",
    "aggregate_importance", "exact_shapley", "masked_prediction",
    "sample_background", "shapley_kernel_weight",
    "MlpBinaryClassifier", "numerical_gradient_check",
    "EntropyTreeClassifier", "TreeNode", "compute_importances", "entropy",
    "__version__",
]
