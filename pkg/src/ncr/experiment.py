"""End-to-end runs: split, tune by CV, refit on the training part, score the test part."""

import logging

from .data import generate_synthetic, make_split
from .evaluation import compute_metrics, mmse
from .models import ModelSpec
from .pipeline import fit_pipeline
from .tuning import grid_search

__all__ = ["default_spec", "run_benchmark", "run_synthetic"]

log = logging.getLogger(__name__)

MODEL_LABELS = {"ols": "LR", "ridge": "RR", "lasso": "LS", "svr": "SVR"}


def default_spec(kind, kernel="linear"):
    return ModelSpec(kind=kind, kernel=kernel if kind == "svr" else "linear")


def run_benchmark(dataset, base_spec, grid, seed=42, test_fraction=0.2, with_mmse=False, workers=1):
    """Tune, refit and evaluate one model on one dataset.

    Returns the run record used by ``evaluation.build_report`` plus the
    fitted pipeline and the grid-search result.
    """
    plan = make_split(len(dataset), test_fraction, seed, grid.folds)
    train, test = dataset.subset(plan.train_indices), dataset.subset(plan.test_indices)
    log.info("%s: tuning %s (augmented=%s) on %d rows", dataset.name, base_spec.kind, grid.augmented, len(train))
    result = grid_search(train, grid, plan, base_spec, workers=workers)
    pipe = fit_pipeline(train.X, train.y, result.spec, result.chaos)
    record = {
        "dataset_id": dataset.name,
        "model": base_spec.kind,
        "augmented": grid.augmented,
        "hyperparams": result.best_params(),
        "objective": grid.objective,
        "cv_score": result.best_cv_score,
        "train_metrics": compute_metrics(train.y, pipe.predict(train.X)).to_dict(),
        "test_metrics": compute_metrics(test.y, pipe.predict(test.X)).to_dict(),
        "converged": bool(pipe.model.converged),
        "n_train": len(train),
        "n_test": len(test),
    }
    if with_mmse:
        record["mmse"] = mmse(dataset)
    return record, pipe, result


def run_synthetic(spec, base_spec, grid, split_seed=42, workers=1):
    return run_benchmark(generate_synthetic(spec), base_spec, grid, seed=split_seed, with_mmse=True, workers=workers)
