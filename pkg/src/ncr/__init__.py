"""Chaos-augmented regression.

Each normalised feature is mapped to the mean of a skew-tent-map orbit that
runs until it lands near the feature value; the resulting tracemeans are
appended to the inputs of ordinary, ridge, lasso or support vector regression.
"""

from .chaos import ChaosParams, Termination, Trace, augment, generate_trace, skew_tent_step, tracemean, tracemeans
from .data import Dataset, NormStats, SplitPlan, SynthSpec, apply_normalizer, fit_normalizer, generate_synthetic, load_csv, make_split
from .evaluation import boost, build_report, compute_metrics, mmse, summarize_boosts
from .models import FittedModel, ModelSpec, fit, predict
from .pipeline import FittedPipeline, fit_pipeline
from .tuning import GridSearchResult, GridSpec, cross_validate, grid_search

__version__ = "0.1.0"

__all__ = [
    "ChaosParams",
    "Dataset",
    "FittedModel",
    "FittedPipeline",
    "GridSearchResult",
    "GridSpec",
    "ModelSpec",
    "NormStats",
    "SplitPlan",
    "SynthSpec",
    "Termination",
    "Trace",
    "apply_normalizer",
    "augment",
    "boost",
    "build_report",
    "compute_metrics",
    "cross_validate",
    "fit",
    "fit_normalizer",
    "fit_pipeline",
    "generate_synthetic",
    "generate_trace",
    "grid_search",
    "load_csv",
    "make_split",
    "mmse",
    "predict",
    "skew_tent_step",
    "summarize_boosts",
    "tracemean",
    "tracemeans",
]
