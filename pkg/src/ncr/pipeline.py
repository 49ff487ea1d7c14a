"""Normalise -> (optionally) augment with tracemeans -> regress.

The regressor sees the min-max scaled features without clipping so that
rows outside the training range still extrapolate linearly.  Only the
chaotic neurons need inputs in [0, 1]; their stimuli are clipped.
"""

import json
from dataclasses import dataclass

import numpy as np

from .chaos import ChaosParams, tracemeans
from .data import NormStats, apply_normalizer, fit_normalizer
from .models import FittedModel, fit, predict

__all__ = ["MODEL_SCHEMA_VERSION", "FittedPipeline", "add_tracemeans", "fit_pipeline", "scale", "transform"]

MODEL_SCHEMA_VERSION = 1


def scale(X, norm):
    return apply_normalizer(X, norm, clip=False)


def add_tracemeans(Z, chaos):
    """``[Z, T]`` with ``T`` driven by ``Z`` clipped to the map's domain."""
    if chaos is None:
        return Z
    return np.hstack([Z, tracemeans(np.clip(Z, 0.0, 1.0), chaos)])


def transform(X, norm, chaos=None):
    return add_tracemeans(scale(X, norm), chaos)


@dataclass(frozen=True)
class FittedPipeline:
    model: FittedModel
    norm: NormStats
    chaos: ChaosParams = None

    @property
    def augmented(self):
        return self.chaos is not None

    def predict(self, X):
        return predict(self.model, transform(X, self.norm, self.chaos))

    def to_dict(self):
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "kind": self.model.kind,
            "augmented": self.augmented,
            "chaos": None if self.chaos is None else self.chaos.to_dict(),
            "norm_stats": self.norm.to_dict(),
            "model": self.model.to_dict(),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        if d.get("schema_version") != MODEL_SCHEMA_VERSION:
            raise ValueError(f"unsupported model schema version {d.get('schema_version')!r}")
        chaos = None if d["chaos"] is None else ChaosParams(**d["chaos"])
        return cls(FittedModel.from_dict(d["model"]), NormStats.from_dict(d["norm_stats"]), chaos)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def fit_pipeline(X, y, spec, chaos=None):
    """Fit normalisation on ``X``, augment when ``chaos`` is given, then fit the model."""
    norm = fit_normalizer(X)
    return FittedPipeline(fit(transform(X, norm, chaos), y, spec), norm, chaos)
