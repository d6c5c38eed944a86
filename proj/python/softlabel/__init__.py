"""Soft-label learning toolkit.

Train classifiers from probability-distribution labels via wrapper methods
around standard hard-label learners, corrupt soft labels with parametric
noise models, and measure the value of label confidence.
"""

from softlabel._core import (
    FittedMethod,
    SllError,
    auc,
    auc_binary,
    base_names,
    confidence_to_soft,
    corrupt,
    fit,
    mean_tvd,
    method_names,
    noise_level_to_beta,
    normalize,
    one_hot,
    simulate_delta_mse,
    tvd,
)

__all__ = [
    "FittedMethod",
    "SllError",
    "auc",
    "auc_binary",
    "base_names",
    "confidence_to_soft",
    "corrupt",
    "fit",
    "mean_tvd",
    "method_names",
    "noise_level_to_beta",
    "normalize",
    "one_hot",
    "simulate_delta_mse",
    "tvd",
]
