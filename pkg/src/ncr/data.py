"""Datasets: CSV ingestion, min-max scaling, splits and synthetic lines."""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .linalg import as_matrix, as_vector

__all__ = [
    "Dataset",
    "NormStats",
    "SplitPlan",
    "SynthSpec",
    "apply_normalizer",
    "fit_normalizer",
    "generate_synthetic",
    "load_csv",
    "make_split",
    "benchmark_synth_specs",
    "write_csv",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: tuple = ()
    name: str = "dataset"
    dropped_rows: int = 0

    def __post_init__(self):
        X = as_matrix(self.X)
        y = as_vector(self.y)
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} entries")
        names = tuple(self.feature_names) or tuple(f"x{j}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise ValueError("feature_names length does not match the column count")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    def __len__(self):
        return self.y.shape[0]

    def subset(self, rows):
        rows = np.asarray(rows)
        return Dataset(self.X[rows], self.y[rows], self.feature_names, self.name)


@dataclass(frozen=True)
class NormStats:
    min: np.ndarray
    max: np.ndarray

    def to_dict(self):
        return {"min": self.min.tolist(), "max": self.max.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["min"], dtype=float), np.asarray(d["max"], dtype=float))


def fit_normalizer(X):
    X = as_matrix(X)
    if X.shape[0] == 0:
        raise ValueError("cannot fit a normaliser on an empty matrix")
    return NormStats(X.min(axis=0), X.max(axis=0))


def apply_normalizer(X, stats, clip=True):
    """Min-max scale with training statistics, clipped to [0, 1] unless ``clip`` is off.

    Constant training columns map to 0.  Unseen rows can fall outside
    the training range; ``clip=False`` keeps their linear extrapolation.
    """
    X = as_matrix(X)
    if X.shape[1] != stats.min.shape[0]:
        raise ValueError(f"X has {X.shape[1]} columns, stats cover {stats.min.shape[0]}")
    span = stats.max - stats.min
    flat = span <= 0
    Z = (X - stats.min) / np.where(flat, 1.0, span)
    Z[:, flat] = 0.0
    return np.clip(Z, 0.0, 1.0) if clip else Z


def load_csv(path, target_column):
    """Read a headed, comma separated numeric table.

    Rows with a missing or non-numeric cell are dropped and counted in the log.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such CSV file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValueError(f"{path} is empty") from None
        if target_column not in header:
            raise KeyError(f"target column {target_column!r} not in {header}")
        t = header.index(target_column)
        rows, dropped = [], 0
        for record in reader:
            if not record or all(not c.strip() for c in record):
                continue
            try:
                values = [float(c) for c in record]
            except ValueError:
                dropped += 1
                continue
            if len(values) != len(header) or not all(math.isfinite(v) for v in values):
                dropped += 1
                continue
            rows.append(values)
    if dropped:
        log.warning("dropped %d unusable row(s) from %s", dropped, path)
    if not rows:
        raise ValueError(f"{path} has no usable rows")
    data = np.asarray(rows)
    features = [j for j in range(len(header)) if j != t]
    return Dataset(data[:, features], data[:, t], tuple(header[j] for j in features), path.stem, dropped)


def write_csv(dataset, path):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*dataset.feature_names, "y"])
        for xi, yi in zip(dataset.X, dataset.y):
            w.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])


@dataclass(frozen=True)
class SplitPlan:
    train_indices: np.ndarray
    test_indices: np.ndarray
    fold_assignment: np.ndarray  # fold id for each position of train_indices
    seed: int
    k: int

    def folds(self):
        """Yield ``(fit_rows, val_rows)`` as positions into the training set."""
        positions = np.arange(self.train_indices.shape[0])
        for f in range(self.k):
            val = positions[self.fold_assignment == f]
            if val.size == 0:
                raise ValueError(f"fold {f} is empty")
            yield positions[self.fold_assignment != f], val


def make_split(m, test_fraction=0.2, seed=42, k=5):
    """Shuffled train/test split plus a k-fold assignment of the training rows."""
    if k < 2:
        raise ValueError("need at least two folds")
    if m < k:
        raise ValueError(f"cannot build {k} folds from {m} samples")
    if not 0.0 <= test_fraction < 1.0:
        raise ValueError("test_fraction must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(m)
    n_test = int(round(m * test_fraction))
    if m - n_test < k:
        raise ValueError(f"training part of {m - n_test} rows cannot fill {k} folds")
    test = np.sort(perm[:n_test])
    train = np.sort(perm[n_test:])
    # sizes differ by at most one, larger folds first
    order = rng.permutation(train.shape[0])
    folds = np.empty(train.shape[0], dtype=np.int64)
    folds[order] = np.arange(train.shape[0]) % k
    return SplitPlan(train, test, folds, seed, k)


@dataclass(frozen=True)
class SynthSpec:
    """Settings for ``y = slope * x + intercept + noise``, x uniform on (-10, 10).

    ``noise_variance`` is the variance (not the standard deviation) of the
    Gaussian noise.
    """

    n: int
    slope: float = 2.0
    intercept: float = 0.0
    noise_variance: float = 5.0
    seed: int = 42
    x_range: tuple = (-10.0, 10.0)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two samples")
        if not self.noise_variance > 0:
            raise ValueError("noise_variance must be positive")

    @property
    def dataset_id(self):
        return f"synth_n{self.n}_m{self.slope:g}_c{self.intercept:g}_var{self.noise_variance:g}_seed{self.seed}"

    def to_dict(self):
        return {
            "n": self.n,
            "slope": self.slope,
            "intercept": self.intercept,
            "noise_variance": self.noise_variance,
            "seed": self.seed,
            "x_range": list(self.x_range),
        }


def generate_synthetic(spec):
    # x first, then one standard normal draw per sample: every (slope, variance)
    # combination of a given n and seed shares the same x and noise shape
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.x_range
    x = rng.uniform(lo, hi, spec.n)
    while np.any(x == lo):  # keep the interval open
        x[x == lo] = rng.uniform(lo, hi, int(np.sum(x == lo)))
    noise = math.sqrt(spec.noise_variance) * rng.standard_normal(spec.n)
    y = spec.slope * x + spec.intercept + noise
    return Dataset(x.reshape(-1, 1), y, ("x",), spec.dataset_id)


def benchmark_synth_specs(seed=42):
    """The 24 synthetic benchmark settings, ordered by size, then variance, then slope."""
    return [
        SynthSpec(n=n, slope=m, noise_variance=v, seed=seed)
        for n in (10, 50, 100, 1000)
        for v in (5.0, 1.0, 0.1)
        for m in (2.0, -2.0)
    ]
