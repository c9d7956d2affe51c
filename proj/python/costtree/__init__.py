"""Cost-sensitive decision tree induction (ACT, LSID3 and greedy baselines)."""

from ._costtree import (
    CostModel,
    DataError,
    Dataset,
    Tree,
    UnsupportedFeature,
    algorithms,
    assign_costs,
    expected_error,
    generate_multi_and_or,
    generate_multi_xor,
    generate_multiplexer,
    generate_xor,
    generate_xor3d,
    kfold,
    paired_ttest,
    problem_scale,
    total_cost,
    train,
    wilcoxon,
)

__all__ = [
    "CostModel",
    "DataError",
    "Dataset",
    "Tree",
    "UnsupportedFeature",
    "algorithms",
    "assign_costs",
    "expected_error",
    "generate_multi_and_or",
    "generate_multi_xor",
    "generate_multiplexer",
    "generate_xor",
    "generate_xor3d",
    "kfold",
    "paired_ttest",
    "problem_scale",
    "total_cost",
    "train",
    "wilcoxon",
]
