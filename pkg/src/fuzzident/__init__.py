"""Fuzzy inference and gradient-descent parameter identification.

Three Takagi-Sugeno-style inference engines over one rule-base type —
moving-rate/production-term, product-of-memberships, and
distance-weighted — plus sample-wise gradient-descent training for the
first two and bundled example datasets.
"""

from .bench import BenchArm, BenchReport, format_bench_markdown, run_bench
from .dataset import (
    AffineMap,
    ConstantColumnError,
    DataFormatError,
    Dataset,
    PartitionSpec,
    build_grid_rulebase,
    load_builtin,
    load_csv,
    load_precipitation,
    load_security,
    normalize_inputs,
    partitions_from_dataset,
)
from .errors import (
    AllDistancesZeroError,
    DegenerateWeightsError,
    EmptyActiveSetError,
    InferenceError,
    ZeroWeightSumError,
)
from .inference import (
    ProductionResult,
    active_rules,
    infer_production,
    infer_sugeno,
    infer_type_distance,
    min_matching_degrees,
    production_term,
)
from .learning import (
    TrainConfig,
    TrainReport,
    accuracy,
    grad_consequent,
    loss,
    predict_batch,
    train_production,
    train_sugeno,
)
from .rulebase import Rule, RuleBase, RuleFormatError, load_rulebase, save_rulebase
from .sets import FuzzyTriangle, GaussianSet, Singleton, TriangularSet, moving_rate

__all__ = [
    "AffineMap",
    "AllDistancesZeroError",
    "BenchArm",
    "BenchReport",
    "ConstantColumnError",
    "DataFormatError",
    "Dataset",
    "DegenerateWeightsError",
    "EmptyActiveSetError",
    "FuzzyTriangle",
    "GaussianSet",
    "InferenceError",
    "PartitionSpec",
    "ProductionResult",
    "Rule",
    "RuleBase",
    "RuleFormatError",
    "Singleton",
    "TrainConfig",
    "TrainReport",
    "TriangularSet",
    "ZeroWeightSumError",
    "accuracy",
    "active_rules",
    "build_grid_rulebase",
    "format_bench_markdown",
    "grad_consequent",
    "infer_production",
    "infer_sugeno",
    "infer_type_distance",
    "load_builtin",
    "load_csv",
    "load_precipitation",
    "load_rulebase",
    "load_security",
    "loss",
    "min_matching_degrees",
    "moving_rate",
    "normalize_inputs",
    "partitions_from_dataset",
    "predict_batch",
    "production_term",
    "run_bench",
    "save_rulebase",
    "train_production",
    "train_sugeno",
    "write_report",
]


def __getattr__(name):
    # Deferred so that importing the package does not load matplotlib.
    if name == "write_report":
        from .report import write_report

        return write_report
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
