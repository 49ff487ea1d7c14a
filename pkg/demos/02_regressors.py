"""
Four regressors written from scratch
====================================

Ordinary least squares (normal equations with a Cholesky factorisation,
SVD fallback), ridge (closed form), lasso (cyclic coordinate descent) and
epsilon-SVR (SMO on the dual) all share the ``fit`` / ``predict`` interface.
"""

import numpy as np

from ncr.models import ModelSpec, fit, predict

rng = np.random.default_rng(0)
X = rng.normal(size=(80, 4))
true_coef = np.array([3.0, 0.0, -1.5, 0.0])
y = 0.7 + X @ true_coef + 0.3 * rng.normal(size=80)

specs = [
    ModelSpec("ols"),
    ModelSpec("ridge", alpha=10.0),
    ModelSpec("lasso", alpha=0.1),
    ModelSpec("svr", C=10.0),
]
for spec in specs:
    model = fit(X, y, spec)
    mse = np.mean((predict(model, X) - y) ** 2)
    if model.coef is not None:
        coef = np.round(model.coef, 3)
    else:  # linear-kernel SVR: the primal weights are the dual-weighted support vectors
        coef = np.round(model.dual_coef @ model.support_vectors, 3)
    print(f"{spec.kind:5s} intercept {model.intercept:7.3f}  coef {coef}  train MSE {mse:.4f}  converged {model.converged}")

# Lasso zeroes the irrelevant columns once alpha is large enough.
for alpha in (0.01, 0.1, 0.5, 1.0, 3.0):
    m = fit(X, y, ModelSpec("lasso", alpha=alpha))
    print(f"lasso alpha={alpha:<5} non-zero coefficients: {int(np.count_nonzero(m.coef))}  sweeps: {m.n_iter}")

# An RBF kernel lets the SVR follow a curve the linear models cannot.
x = np.linspace(0, 1, 60).reshape(-1, 1)
wave = np.sin(2 * np.pi * x[:, 0])
for kernel in ("linear", "rbf"):
    m = fit(x, wave, ModelSpec("svr", kernel=kernel, C=100.0, gamma=20.0 if kernel == "rbf" else "auto"))
    print(f"svr {kernel:6s} on a sine wave: max error {np.abs(predict(m, x) - wave).max():.3f}")
