"""Chaotic neuron feature extraction.

Each normalised feature value acts as the stimulus of a one-dimensional
skew tent map neuron.  The neuron fires from an initial activity ``q`` and
its trace stops once the orbit comes within ``eps_stim`` of the stimulus.
The mean of that trace (the "tracemean") is appended next to the original
feature, doubling the column count.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "ChaosParams",
    "Termination",
    "Trace",
    "augment",
    "generate_trace",
    "skew_tent_step",
    "tracemean",
    "tracemeans",
]

SKEW = 0.499


@dataclass(frozen=True)
class ChaosParams:
    """Neuron configuration.

    ``max_iters`` caps the number of map applications, so a trace holds at
    most ``max_iters + 1`` values.
    """

    q: float
    eps_stim: float
    b: float = SKEW
    max_iters: int = 10000

    def __post_init__(self):
        if not 0.0 < self.b < 1.0:
            raise ValueError(f"skew b must lie in (0, 1), got {self.b}")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"initial activity q must lie in (0, 1), got {self.q}")
        if not self.eps_stim > 0.0:
            raise ValueError(f"eps_stim must be positive, got {self.eps_stim}")
        if int(self.max_iters) < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")

    def to_dict(self):
        return {"q": self.q, "eps_stim": self.eps_stim, "b": self.b, "max_iters": self.max_iters}


class Termination(str, Enum):
    NEIGHBORHOOD_HIT = "neighborhood_hit"
    ITER_CAP = "iter_cap"


@dataclass(frozen=True)
class Trace:
    values: tuple
    terminated_by: Termination


def skew_tent_step(x, b=SKEW):
    """One application of the skew tent map on [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"skew tent map is defined on [0, 1], got {x}")
    if x < b:
        return x / b
    return (1.0 - x) / (1.0 - b)


def generate_trace(stimulus, params):
    if not 0.0 <= stimulus <= 1.0:
        raise ValueError(f"stimulus must lie in [0, 1], got {stimulus}")
    x = float(params.q)
    values = [x]
    for _ in range(params.max_iters):
        if abs(x - stimulus) < params.eps_stim:
            return Trace(tuple(values), Termination.NEIGHBORHOOD_HIT)
        x = skew_tent_step(x, params.b)
        values.append(x)
    if abs(x - stimulus) < params.eps_stim:
        return Trace(tuple(values), Termination.NEIGHBORHOOD_HIT)
    return Trace(tuple(values), Termination.ITER_CAP)


def tracemean(trace):
    values = trace.values if isinstance(trace, Trace) else trace
    if len(values) == 0:
        raise ValueError("empty trace")
    # sequential summation so the vectorised path reproduces it bit for bit
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def tracemeans(stimuli, params):
    """Tracemean for every stimulus in an array, iterating all neurons together.

    Produces exactly the same floating point values as calling
    ``tracemean(generate_trace(s, params))`` element by element.
    """
    s = np.asarray(stimuli, dtype=np.float64)
    shape = s.shape
    s = s.reshape(-1)
    if s.size and (s.min() < 0.0 or s.max() > 1.0):
        raise ValueError("stimuli must lie in [0, 1]")
    b, eps = float(params.b), float(params.eps_stim)

    out = np.empty_like(s)
    idx = np.arange(s.size)
    target = s.copy()
    x = np.full(s.size, float(params.q))
    total = x.copy()
    count = 1
    for _ in range(params.max_iters):
        hit = np.abs(x - target) < eps
        if hit.any():
            out[idx[hit]] = total[hit] / count
            keep = ~hit
            idx, target, x, total = idx[keep], target[keep], x[keep], total[keep]
            if idx.size == 0:
                break
        # same operations as skew_tent_step so results agree bit for bit
        x = np.where(x < b, x / b, (1.0 - x) / (1.0 - b))
        total = total + x
        count += 1
    if idx.size:
        out[idx] = total / count
    return out.reshape(shape)


def augment(Z, params):
    """Return ``[Z, T]`` where ``T[i, j]`` is the tracemean driven by ``Z[i, j]``."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2:
        raise ValueError(f"expected a 2-D feature matrix, got shape {Z.shape}")
    if Z.size and (not np.all(np.isfinite(Z)) or Z.min() < 0.0 or Z.max() > 1.0):
        raise ValueError("augment expects normalised features in [0, 1]")
    return np.hstack([Z, tracemeans(Z, params)])
