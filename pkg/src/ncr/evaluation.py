"""Regression metrics, the pseudo-inverse MMSE reference, boosts and reports."""

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .linalg import as_matrix, as_vector, pseudo_inverse

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "BoostSummary",
    "Metrics",
    "boost",
    "build_report",
    "compute_metrics",
    "mmse",
    "report_csv",
    "report_json",
    "summarize_boosts",
    "write_report",
]

REPORT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Metrics:
    r2: float
    mse: float
    mae: float
    n: int

    def to_dict(self):
        return asdict(self)


def r2_score(y_true, y_pred):
    """Coefficient of determination; 0 when the targets have no variance."""
    y_true, y_pred = as_vector(y_true), as_vector(y_pred)
    ss_tot = float(((y_true - y_true.mean()) ** 2).sum())
    if ss_tot == 0.0:
        return 0.0
    return 1.0 - float(((y_true - y_pred) ** 2).sum()) / ss_tot


def mean_squared_error(y_true, y_pred):
    r = as_vector(y_true) - as_vector(y_pred)
    return float(r @ r) / r.shape[0]


def compute_metrics(y_true, y_pred):
    y_true, y_pred = as_vector(y_true), as_vector(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"length mismatch: {y_true.shape[0]} vs {y_pred.shape[0]}")
    if y_true.shape[0] == 0:
        raise ValueError("cannot score an empty prediction")
    r = y_true - y_pred
    return Metrics(
        r2=r2_score(y_true, y_pred),
        mse=float(r @ r) / r.shape[0],
        mae=float(np.abs(r).mean()),
        n=int(r.shape[0]),
    )


def mmse(dataset):
    """Mean squared residual of the least-squares line through the whole dataset.

    The fit (with intercept) is computed with the SVD pseudo-inverse.  It is
    the smallest in-sample MSE any affine predictor can reach.
    """
    X = as_matrix(dataset.X)
    y = as_vector(dataset.y)
    if y.shape[0] == 0:
        raise ValueError("empty dataset")
    A = np.column_stack([np.ones(X.shape[0]), X])
    r = y - A @ (pseudo_inverse(A) @ y)
    return float(r @ r) / r.shape[0]


def boost(r2_aug, r2_trad):
    """Relative R^2 gain of the augmented model; ``None`` when undefined."""
    if r2_trad == 0:
        return None
    return (r2_aug - r2_trad) / r2_trad


@dataclass(frozen=True)
class BoostSummary:
    boosts: tuple
    improved_count: int
    average_boost_over_improved: float  # None when nothing improved

    def to_dict(self):
        return {
            "boosts": list(self.boosts),
            "improved_count": self.improved_count,
            "average_boost_over_improved": self.average_boost_over_improved,
        }


def summarize_boosts(pairs):
    """Count datasets with a positive boost and average the boost over those only.

    Pairs whose traditional R^2 is not positive get no boost and are skipped.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no (augmented, traditional) pairs given")
    boosts = tuple(boost(a, t) if t > 0 else None for a, t in pairs)
    improved = [b for b in boosts if b is not None and b > 0]
    average = sum(improved) / len(improved) if improved else None
    return BoostSummary(boosts, len(improved), average)


def _clean(value):
    """Make a value JSON-safe with plain Python scalars."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def build_report(runs, metadata=None):
    """Assemble run records into a report, pairing augmented runs with baselines.

    Each run is a dict with at least ``dataset_id``, ``model``, ``augmented``,
    ``hyperparams``, ``train_metrics`` and ``test_metrics`` (and optionally
    ``mmse``).  Boosts compare test R^2 of the augmented and baseline runs
    that share a dataset and model.
    """
    runs = list(runs)
    if not runs:
        raise ValueError("no runs to report")
    ordered = sorted(runs, key=lambda r: (r["dataset_id"], r["model"], bool(r["augmented"])))

    by_key = {(r["dataset_id"], r["model"], bool(r["augmented"])): r for r in ordered if not r.get("error")}
    boost_summary = {}
    for model in sorted({r["model"] for r in ordered}):
        rows, pairs = [], []
        for ds in sorted({r["dataset_id"] for r in ordered}):
            aug, base = by_key.get((ds, model, True)), by_key.get((ds, model, False))
            if aug is None or base is None:
                continue
            a, t = aug["test_metrics"]["r2"], base["test_metrics"]["r2"]
            pairs.append((a, t))
            rows.append({"dataset_id": ds, "r2_augmented": a, "r2_traditional": t, "boost": boost(a, t)})
        if pairs:
            summary = summarize_boosts(pairs)
            boost_summary[model] = {
                "per_dataset": rows,
                "improved_count": summary.improved_count,
                "average_boost_over_improved": summary.average_boost_over_improved,
            }
    return _clean(
        {
            "schema_version": REPORT_SCHEMA_VERSION,
            "metadata": dict(sorted((metadata or {}).items())),
            "runs": ordered,
            "boost_summary": boost_summary,
        }
    )


def report_json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


_CSV_FIELDS = (
    "dataset_id",
    "model",
    "augmented",
    "hyperparams",
    "cv_score",
    "train_r2",
    "train_mse",
    "train_mae",
    "test_r2",
    "test_mse",
    "test_mae",
    "mmse",
    "error",
)


def report_csv(report):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in report["runs"]:
        tr, te = r.get("train_metrics") or {}, r.get("test_metrics") or {}
        w.writerow(
            {
                "dataset_id": r["dataset_id"],
                "model": r["model"],
                "augmented": int(bool(r["augmented"])),
                "hyperparams": json.dumps(r.get("hyperparams", {}), sort_keys=True),
                "cv_score": r.get("cv_score"),
                "train_r2": tr.get("r2"),
                "train_mse": tr.get("mse"),
                "train_mae": tr.get("mae"),
                "test_r2": te.get("r2"),
                "test_mse": te.get("mse"),
                "test_mae": te.get("mae"),
                "mmse": r.get("mmse"),
                "error": r.get("error", ""),
            }
        )
    return buf.getvalue()


def write_report(report, out_dir, stem="report"):
    """Write ``<stem>.json`` and its tabular ``<stem>.csv`` mirror."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{stem}.json"
    csv_path = out_dir / f"{stem}.csv"
    json_path.write_text(report_json(report), encoding="utf-8")
    csv_path.write_text(report_csv(report), encoding="utf-8")
    return json_path, csv_path
