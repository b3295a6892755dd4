"""Smooth Rank: ensemble bipartite-ranking risk models for censored
survival data, with concordance-index evaluation, a synthetic data
generator, and reproducible experiment protocols."""

__version__ = "0.1.0"

from .concordance import (ConcordanceCounts, comparable_pairs, concordance_counts,
                          concordance_index)
from .data import (BinarizationSpec, BinarySample, ClassLabel, SurvivalDataset,
                   SurvivalRecord, binarize, impute_knn, load_csv, save_csv,
                   select_threshold)
from .datasets import load_colon, load_lung, load_pbc
from .experiments import (ExperimentResult, SplitPlan, SweepRow, emit_report,
                          run_dimensionality_sweep, run_random_splits, run_size_sweep)
from .kde import DensityEstimate, EvaluationGrid, bandwidth, estimate_density, make_grid
from .loess import LoessFit, loess_fit, loess_predict
from .model import (ClassPriors, MarginalPredictor, SmoothRankModel, build_predictor,
                    build_q_raw, load_model, predictor_weight, save_model, score,
                    score_dataset, shrink_weights, train)
from .synthetic import SyntheticConfig, generate, sweep_feature_counts

__all__ = [
    "BinarizationSpec", "BinarySample", "ClassLabel", "ClassPriors",
    "ConcordanceCounts", "DensityEstimate", "EvaluationGrid", "ExperimentResult",
    "LoessFit", "MarginalPredictor", "SmoothRankModel", "SplitPlan",
    "SurvivalDataset", "SurvivalRecord", "SweepRow", "SyntheticConfig",
    "bandwidth", "binarize", "build_predictor", "build_q_raw", "comparable_pairs",
    "concordance_counts", "concordance_index", "emit_report", "estimate_density",
    "generate", "impute_knn", "load_colon", "load_csv", "load_lung", "load_model",
    "load_pbc", "loess_fit", "loess_predict", "make_grid", "predictor_weight",
    "run_dimensionality_sweep", "run_random_splits", "run_size_sweep", "save_csv",
    "save_model", "score", "score_dataset", "select_threshold", "shrink_weights",
    "sweep_feature_counts", "train",
]
