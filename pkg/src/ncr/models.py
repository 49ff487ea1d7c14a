"""Linear regressors and epsilon-insensitive support vector regression.

All four share ``fit(X, y, spec)`` / ``predict(model, X)``.

Objective conventions (intercepts are never penalised):

* OLS:   ``||y - b0 - X b||^2``
* Ridge: ``||y - b0 - X b||^2 + alpha * ||b||^2``
* Lasso: ``||y - b0 - X b||^2 / (2 m) + alpha * ||b||_1``
* SVR:   the dual of the soft-margin epsilon-tube problem with box ``C``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .linalg import as_matrix, as_vector, cholesky_solve, solve_least_squares

__all__ = [
    "KINDS",
    "FittedModel",
    "ModelSpec",
    "fit",
    "fit_lasso",
    "fit_ols",
    "fit_ridge",
    "fit_svr",
    "kernel_matrix",
    "lasso_kkt_residual",
    "lasso_objective",
    "predict",
    "rbf_kernel",
    "resolve_gamma",
    "soft_threshold",
    "svr_dual_objective",
]

KINDS = ("ols", "ridge", "lasso", "svr")
KERNELS = ("linear", "rbf")


@dataclass(frozen=True)
class ModelSpec:
    kind: str = "ols"
    alpha: float = 1.0
    C: float = 1.0
    tube: float = 0.1
    kernel: str = "linear"
    gamma: object = "auto"
    lasso_max_iters: int = 10000
    lasso_tol: float = 1e-4
    svr_tol: float = 1e-3
    svr_max_passes: int = 200

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if not self.C > 0:
            raise ValueError("C must be > 0")
        if self.tube < 0:
            raise ValueError("tube must be >= 0")
        if self.gamma != "auto" and not float(self.gamma) > 0:
            raise ValueError("gamma must be > 0 or 'auto'")

    def hyperparams(self):
        """The tunable settings that matter for this kind, in a stable order."""
        if self.kind in ("ridge", "lasso"):
            return {"alpha": self.alpha}
        if self.kind == "svr":
            return {"C": self.C, "tube": self.tube, "kernel": self.kernel, "gamma": self.gamma}
        return {}

    def to_dict(self):
        return {
            "kind": self.kind,
            "alpha": self.alpha,
            "C": self.C,
            "tube": self.tube,
            "kernel": self.kernel,
            "gamma": self.gamma,
            "lasso_max_iters": self.lasso_max_iters,
            "lasso_tol": self.lasso_tol,
            "svr_tol": self.svr_tol,
            "svr_max_passes": self.svr_max_passes,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass(frozen=True)
class FittedModel:
    spec: ModelSpec
    n_features: int
    coef: np.ndarray = None
    intercept: float = 0.0
    support_vectors: np.ndarray = None
    dual_coef: np.ndarray = None
    gamma: float = None
    converged: bool = True
    n_iter: int = 0
    objective_path: tuple = field(default=(), repr=False)

    @property
    def kind(self):
        return self.spec.kind

    def to_dict(self):
        d = {
            "spec": self.spec.to_dict(),
            "n_features": self.n_features,
            "intercept": self.intercept,
            "converged": self.converged,
            "n_iter": self.n_iter,
        }
        if self.coef is not None:
            d["coef"] = self.coef.tolist()
        if self.support_vectors is not None:
            d["support_vectors"] = self.support_vectors.tolist()
            d["dual_coef"] = self.dual_coef.tolist()
            d["gamma"] = self.gamma
        return d

    @classmethod
    def from_dict(cls, d):
        sv = d.get("support_vectors")
        return cls(
            spec=ModelSpec.from_dict(d["spec"]),
            n_features=d["n_features"],
            coef=None if "coef" not in d else np.asarray(d["coef"], dtype=float),
            intercept=d["intercept"],
            support_vectors=None if sv is None else np.asarray(sv, dtype=float).reshape(-1, d["n_features"]),
            dual_coef=None if sv is None else np.asarray(d["dual_coef"], dtype=float),
            gamma=d.get("gamma"),
            converged=d["converged"],
            n_iter=d["n_iter"],
        )


def _check_xy(X, y):
    X = as_matrix(X)
    y = as_vector(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]} entries")
    if X.shape[0] == 0:
        raise ValueError("cannot fit on an empty dataset")
    return X, y


def fit_ols(X, y, spec=None):
    X, y = _check_xy(X, y)
    beta = solve_least_squares(np.column_stack([np.ones(X.shape[0]), X]), y)
    return FittedModel(spec or ModelSpec("ols"), X.shape[1], coef=beta[1:], intercept=float(beta[0]))


def fit_ridge(X, y, alpha, spec=None):
    X, y = _check_xy(X, y)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    x_mean, y_mean = X.mean(axis=0), y.mean()
    Xc, yc = X - x_mean, y - y_mean
    if alpha == 0:
        beta = solve_least_squares(Xc, yc)
    else:
        beta = cholesky_solve(Xc.T @ Xc + alpha * np.eye(X.shape[1]), Xc.T @ yc)
    spec = spec or ModelSpec("ridge", alpha=alpha)
    return FittedModel(spec, X.shape[1], coef=beta, intercept=float(y_mean - x_mean @ beta))


def soft_threshold(z, t):
    if t < 0:
        raise ValueError("threshold must be >= 0")
    if abs(z) <= t:
        return 0.0
    return math.copysign(abs(z) - t, z)


def lasso_objective(X, y, coef, intercept, alpha):
    r = y - intercept - X @ coef
    return 0.5 * (r @ r) / y.shape[0] + alpha * np.abs(coef).sum()


def lasso_kkt_residual(X, y, coef, alpha):
    """Largest violation of the Lasso subgradient optimality conditions."""
    X, y = _check_xy(X, y)
    Xc, yc = X - X.mean(axis=0), y - y.mean()
    g = Xc.T @ (yc - Xc @ coef) / X.shape[0]
    nz = coef != 0
    viol = np.where(nz, np.abs(g - alpha * np.sign(coef)), np.maximum(np.abs(g) - alpha, 0.0))
    return float(viol.max(initial=0.0))


def fit_lasso(X, y, alpha, max_iters=10000, tol=1e-4, spec=None):
    """Cyclic coordinate descent with soft thresholding.

    Works on centred data through the Gram matrix.  A sweep stops the
    iteration once the largest coefficient change, measured in units of
    each column's standard deviation, drops below ``tol``.
    """
    X, y = _check_xy(X, y)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    m, d = X.shape
    x_mean, y_mean = X.mean(axis=0), y.mean()
    Xc, yc = X - x_mean, y - y_mean
    G = Xc.T @ Xc / m
    c = Xc.T @ yc / m
    yy = yc @ yc / m
    col_sq = np.diag(G).copy()
    scale = np.sqrt(col_sq)

    beta = np.zeros(d)
    grad = c.copy()  # Xc^T (yc - Xc beta) / m
    path = [0.5 * yy]
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iters + 1):
        max_step = 0.0
        for j in range(d):
            if col_sq[j] <= 0.0:
                continue
            old = beta[j]
            rho = grad[j] + col_sq[j] * old
            new = soft_threshold(rho, alpha) / col_sq[j]
            if new != old:
                delta = new - old
                beta[j] = new
                grad -= G[:, j] * delta
                max_step = max(max_step, abs(delta) * scale[j])
        path.append(0.5 * (yy - 2.0 * (beta @ c) + beta @ G @ beta) + alpha * np.abs(beta).sum())
        if max_step < tol:
            converged = True
            break
    spec = spec or ModelSpec("lasso", alpha=alpha, lasso_max_iters=max_iters, lasso_tol=tol)
    return FittedModel(
        spec,
        d,
        coef=beta,
        intercept=float(y_mean - x_mean @ beta),
        converged=converged,
        n_iter=n_iter,
        objective_path=tuple(path),
    )


def rbf_kernel(u, v, gamma):
    u, v = as_vector(u), as_vector(v)
    if u.shape != v.shape:
        raise ValueError("vectors must have equal length")
    if not gamma > 0:
        raise ValueError("gamma must be > 0")
    diff = u - v
    return math.exp(-gamma * float(diff @ diff))


def kernel_matrix(A, B, kernel="linear", gamma=None):
    A, B = as_matrix(A), as_matrix(B)
    if kernel == "linear":
        return A @ B.T
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * (A @ B.T)
    return np.exp(-gamma * np.maximum(sq, 0.0))


def resolve_gamma(spec, X):
    if spec.kernel != "rbf":
        return None
    if spec.gamma != "auto":
        return float(spec.gamma)
    var = float(X.var())
    return 1.0 / (X.shape[1] * var) if var > 0 else 1.0


def svr_dual_objective(dual_coef, K, y, tube):
    """``0.5 b'Kb + tube * |b|_1 - y'b`` for ``b = alpha - alpha*`` (to be minimised)."""
    b = np.asarray(dual_coef, dtype=float)
    return 0.5 * b @ K @ b + tube * np.abs(b).sum() - y @ b


@njit(cache=True)
def _smo(K, y, C, tube, tol, max_iter):
    """SMO on the 2l-variable dual with second-order working set selection.

    Variable ``t < l`` is the upper-tube multiplier of sample ``t`` (sign +1),
    ``t >= l`` the lower-tube multiplier of sample ``t - l`` (sign -1).
    Returns ``(alpha, rho, converged, n_iter)``; the decision function is
    ``sum (alpha_i - alpha_{i+l}) K(x_i, x) - rho``.
    """
    l = y.shape[0]
    n = 2 * l
    tau = 1e-12
    s = np.empty(n)
    a = np.zeros(n)
    grad = np.empty(n)
    for t in range(l):
        s[t] = 1.0
        s[t + l] = -1.0
        grad[t] = tube - y[t]
        grad[t + l] = tube + y[t]

    converged = False
    it = 0
    while it < max_iter:
        g_max = -np.inf
        i = -1
        for t in range(n):
            if (s[t] > 0 and a[t] < C) or (s[t] < 0 and a[t] > 0):
                v = -s[t] * grad[t]
                if v >= g_max:
                    g_max = v
                    i = t
        if i < 0:
            converged = True
            break
        ki = i % l
        g_min = np.inf
        j = -1
        best = np.inf
        for t in range(n):
            if (s[t] > 0 and a[t] > 0) or (s[t] < 0 and a[t] < C):
                v = -s[t] * grad[t]
                if v < g_min:
                    g_min = v
                b_it = g_max - v
                if b_it > 0:
                    kt = t % l
                    quad = K[ki, ki] + K[kt, kt] - 2.0 * K[ki, kt]
                    if quad <= 0:
                        quad = tau
                    score = -(b_it * b_it) / quad
                    if score <= best:
                        best = score
                        j = t
        if g_max - g_min < tol or j < 0:
            converged = True
            break

        kj = j % l
        q_ij = s[i] * s[j] * K[ki, kj]
        ai = a[i]
        aj = a[j]
        if s[i] != s[j]:
            quad = K[ki, ki] + K[kj, kj] + 2.0 * q_ij
            if quad <= 0:
                quad = tau
            delta = (-grad[i] - grad[j]) / quad
            diff = ai - aj
            ni = ai + delta
            nj = aj + delta
            if diff > 0:
                if nj < 0:
                    nj = 0.0
                    ni = diff
            elif ni < 0:
                ni = 0.0
                nj = -diff
            if diff > 0:
                if ni > C:
                    ni = C
                    nj = C - diff
            elif nj > C:
                nj = C
                ni = C + diff
        else:
            quad = K[ki, ki] + K[kj, kj] - 2.0 * q_ij
            if quad <= 0:
                quad = tau
            delta = (grad[i] - grad[j]) / quad
            total = ai + aj
            ni = ai - delta
            nj = aj + delta
            if total > C:
                if ni > C:
                    ni = C
                    nj = total - C
            elif nj < 0:
                nj = 0.0
                ni = total
            if total > C:
                if nj > C:
                    nj = C
                    ni = total - C
            elif ni < 0:
                ni = 0.0
                nj = total
        a[i] = ni
        a[j] = nj
        di = (ni - ai) * s[i]
        dj = (nj - aj) * s[j]
        for t in range(n):
            kt = t % l
            grad[t] += s[t] * (K[kt, ki] * di + K[kt, kj] * dj)
        it += 1

    # offset from free multipliers, else the midpoint of the feasible interval
    total = 0.0
    n_free = 0
    ub = np.inf
    lb = -np.inf
    for t in range(n):
        yg = s[t] * grad[t]
        if a[t] >= C:
            if s[t] < 0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        elif a[t] <= 0:
            if s[t] > 0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        else:
            total += yg
            n_free += 1
    if n_free > 0:
        rho = total / n_free
    elif np.isfinite(ub) and np.isfinite(lb):
        rho = (ub + lb) / 2
    elif np.isfinite(ub):
        rho = ub
    else:
        rho = lb
    return a, rho, converged, it


def fit_svr(X, y, spec):
    X, y = _check_xy(X, y)
    gamma = resolve_gamma(spec, X)
    K = kernel_matrix(X, X, spec.kernel, gamma)
    l = X.shape[0]
    a, rho, converged, n_iter = _smo(K, y, float(spec.C), float(spec.tube), float(spec.svr_tol), spec.svr_max_passes * 2 * l)
    beta = a[:l] - a[l:]
    keep = beta != 0
    return FittedModel(
        spec,
        X.shape[1],
        intercept=-rho,
        support_vectors=X[keep].copy(),
        dual_coef=beta[keep],
        gamma=gamma,
        converged=converged,
        n_iter=n_iter,
    )


def fit(X, y, spec):
    """Fit the regressor described by ``spec``."""
    if spec.kind == "ols":
        return fit_ols(X, y, spec)
    if spec.kind == "ridge":
        return fit_ridge(X, y, spec.alpha, spec)
    if spec.kind == "lasso":
        return fit_lasso(X, y, spec.alpha, spec.lasso_max_iters, spec.lasso_tol, spec)
    return fit_svr(X, y, spec)


def predict(model, X):
    X = as_matrix(X)
    if X.shape[1] != model.n_features:
        raise ValueError(f"model expects {model.n_features} features, got {X.shape[1]}")
    if model.kind != "svr":
        return model.intercept + X @ model.coef
    if model.dual_coef.size == 0:
        return np.full(X.shape[0], model.intercept)
    K = kernel_matrix(X, model.support_vectors, model.spec.kernel, model.gamma)
    return K @ model.dual_coef + model.intercept
