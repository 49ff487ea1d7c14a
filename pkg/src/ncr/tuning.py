"""Five-fold cross-validated grid search over chaos and model hyperparameters.

Cells are enumerated in a fixed order (q ascending, eps_stim ascending, then
the model grid in the order given) and the first cell with the best mean
fold score wins, so serial and parallel runs pick the same cell.
"""

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .chaos import ChaosParams
from .data import fit_normalizer
from .evaluation import mean_squared_error, r2_score
from .models import ModelSpec, fit, predict
from .pipeline import add_tracemeans, scale

__all__ = [
    "GridSearchResult",
    "GridSpec",
    "SMALL_ALPHA_GRID",
    "cross_validate",
    "grid_search",
    "write_cell_scores",
]

OBJECTIVES = ("r2", "mse")
# alternative Lasso grid for targets where alpha >= 0.1 zeroes every coefficient
SMALL_ALPHA_GRID = (0.0001, 0.001, 0.01)


def _steps(start, stop, step):
    n = int(round((stop - start) / step)) + 1
    return tuple(round(start + k * step, 10) for k in range(n) if start + k * step <= stop + 1e-12)


@dataclass(frozen=True)
class GridSpec:
    q_grid: tuple = _steps(0.01, 0.99, 0.01)
    eps_grid: tuple = _steps(0.01, 0.45, 0.01)
    alpha_grid: tuple = (0.1, 1.0, 10.0)
    C_grid: tuple = (1.0, 10.0, 50.0, 100.0)
    objective: str = "r2"
    folds: int = 5
    augmented: bool = True
    label: str = "full"

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        for name in ("q_grid", "eps_grid", "alpha_grid", "C_grid"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} is empty")

    @classmethod
    def coarse(cls, **kw):
        """Strided grid for quick runs: q every 0.07, eps_stim every 0.05."""
        return cls(q_grid=_steps(0.01, 0.99, 0.07), eps_grid=_steps(0.01, 0.45, 0.05), label="coarse", **kw)

    def chaos_cells(self):
        if not self.augmented:
            return [None]
        return [ChaosParams(q=q, eps_stim=e) for q in self.q_grid for e in self.eps_grid]

    def model_cells(self, base):
        if base.kind in ("ridge", "lasso"):
            return [replace(base, alpha=float(a)) for a in self.alpha_grid]
        if base.kind == "svr":
            return [replace(base, C=float(c)) for c in self.C_grid]
        return [base]

    def to_dict(self):
        return {
            "q_grid": list(self.q_grid),
            "eps_grid": list(self.eps_grid),
            "alpha_grid": list(self.alpha_grid),
            "C_grid": list(self.C_grid),
            "objective": self.objective,
            "folds": self.folds,
            "augmented": self.augmented,
            "label": self.label,
        }


@dataclass(frozen=True)
class GridSearchResult:
    chaos: ChaosParams  # None for the baseline
    spec: ModelSpec
    best_cv_score: float
    objective: str
    cell_scores: list = field(default_factory=list, repr=False)

    def best_params(self):
        params = {}
        if self.chaos is not None:
            params.update(q=self.chaos.q, eps_stim=self.chaos.eps_stim)
        params.update(self.spec.hyperparams())
        return params


def _score(objective, y_true, y_pred):
    if objective == "r2":
        return r2_score(y_true, y_pred)
    return mean_squared_error(y_true, y_pred)


def _fold_data(train, plan):
    """Per fold: scaled fit/validation features and targets."""
    out = []
    for fit_rows, val_rows in plan.folds():
        norm = fit_normalizer(train.X[fit_rows])
        out.append((scale(train.X[fit_rows], norm), train.y[fit_rows], scale(train.X[val_rows], norm), train.y[val_rows]))
    return out


def _chaos_cell_scores(folds, chaos, specs, objective):
    """Fold scores for every model spec under one chaos setting: list[spec][fold]."""
    scores = [[] for _ in specs]
    for Zfit, yfit, Zval, yval in folds:
        Zfit, Zval = add_tracemeans(Zfit, chaos), add_tracemeans(Zval, chaos)
        for k, spec in enumerate(specs):
            model = fit(Zfit, yfit, spec)
            scores[k].append(_score(objective, yval, predict(model, Zval)))
    return scores


def cross_validate(train, chaos, spec, plan, objective="r2"):
    """Mean validation score over the plan's folds.

    Normalisation (and augmentation) is fitted on each fold's training part.
    Returns ``(mean_score, fold_scores)``.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    folds = _fold_data(train, plan)
    fold_scores = _chaos_cell_scores(folds, chaos, [spec], objective)[0]
    return float(np.mean(fold_scores)), fold_scores


def _better(objective, a, b):
    return a > b if objective == "r2" else a < b


def _worker(args):
    folds, chaos_list, specs, objective = args
    return [_chaos_cell_scores(folds, c, specs, objective) for c in chaos_list]


def grid_search(train, grid, plan, base_spec, workers=1):
    """Exhaustive search; ``plan`` supplies the fold assignment of ``train``."""
    if plan.train_indices.shape[0] != len(train):
        raise ValueError("split plan does not match the training set size")
    folds = _fold_data(train, plan)
    chaos_list = grid.chaos_cells()
    specs = grid.model_cells(base_spec)

    if workers > 1 and len(chaos_list) > 1:
        chunks = [chaos_list[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_worker, [(folds, c, specs, grid.objective) for c in chunks]))
        per_chaos = [None] * len(chaos_list)
        for k, part in enumerate(parts):
            per_chaos[k::workers] = part
    else:
        per_chaos = _worker((folds, chaos_list, specs, grid.objective))

    best = None
    rows = []
    for chaos, spec_scores in zip(chaos_list, per_chaos):
        for spec, fold_scores in zip(specs, spec_scores):
            mean = float(np.mean(fold_scores))
            rows.append(
                {
                    "q": None if chaos is None else chaos.q,
                    "eps_stim": None if chaos is None else chaos.eps_stim,
                    "params": spec.hyperparams(),
                    "fold_scores": [float(s) for s in fold_scores],
                    "mean": mean,
                }
            )
            if best is None or _better(grid.objective, mean, best[2]):
                best = (chaos, spec, mean)
    return GridSearchResult(best[0], best[1], best[2], grid.objective, rows)


def write_cell_scores(result, path):
    """Dump every evaluated cell as CSV for auditing."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        n_folds = max((len(r["fold_scores"]) for r in result.cell_scores), default=0)
        w.writerow(["q", "eps_stim", "params", *[f"fold{k}" for k in range(n_folds)], "mean"])
        for r in result.cell_scores:
            w.writerow(
                [
                    "" if r["q"] is None else r["q"],
                    "" if r["eps_stim"] is None else r["eps_stim"],
                    json.dumps(r["params"], sort_keys=True),
                    *r["fold_scores"],
                    r["mean"],
                ]
            )
    return path
