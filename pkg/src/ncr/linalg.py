"""Small dense linear algebra helpers shared by the solvers.

Matrices and vectors are plain float64 numpy arrays; ``as_matrix`` and
``as_vector`` validate shape and finiteness at the boundary.
"""

import numpy as np
from scipy.linalg import solve_triangular

__all__ = [
    "LinAlgError",
    "NotPositiveDefiniteError",
    "as_matrix",
    "as_vector",
    "cholesky_solve",
    "pseudo_inverse",
    "solve_least_squares",
]

# normal equations square the condition number; past this we use the SVD path
_PIVOT_RATIO = 1e-12


class LinAlgError(ValueError):
    pass


class NotPositiveDefiniteError(LinAlgError):
    """Raised when a Cholesky pivot is non-positive (caller should fall back)."""


def as_matrix(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise LinAlgError(f"expected a 2-D matrix, got shape {X.shape}")
    if X.size and not np.all(np.isfinite(X)):
        raise LinAlgError("matrix contains NaN or Inf")
    return X


def as_vector(y):
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size and not np.all(np.isfinite(y)):
        raise LinAlgError("vector contains NaN or Inf")
    return y


def _cholesky(A, pivot_ratio=0.0):
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise LinAlgError(f"matrix must be square, got {A.shape}")
    if not np.allclose(A, A.T, rtol=1e-10, atol=1e-12 * max(1.0, np.abs(A).max(initial=0.0))):
        raise NotPositiveDefiniteError("matrix is not symmetric")
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from None
    d = np.diag(L) ** 2
    if d.size and d.min() <= pivot_ratio * d.max():
        raise NotPositiveDefiniteError("Cholesky pivot below tolerance")
    return L


def cholesky_solve(A, b):
    """Solve ``A x = b`` for symmetric positive definite ``A``.

    Raises
    ------
    NotPositiveDefiniteError
        If ``A`` is not SPD.
    """
    b = as_vector(b)
    L = _cholesky(A)
    if L.shape[0] != b.shape[0]:
        raise LinAlgError(f"dimension mismatch: A is {L.shape}, b has {b.shape[0]}")
    z = solve_triangular(L, b, lower=True)
    return solve_triangular(L.T, z, lower=False)


def pseudo_inverse(X, tol=1e-12):
    """Moore-Penrose pseudo-inverse via the SVD.

    Singular values below ``tol * sigma_max`` are treated as zero.
    """
    X = as_matrix(X)
    if X.size == 0:
        raise LinAlgError("empty matrix")
    try:
        U, s, Vt = np.linalg.svd(X, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise LinAlgError(f"SVD did not converge: {exc}") from None
    cutoff = tol * s.max() if s.size else 0.0
    keep = s > cutoff
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (Vt.T * s_inv) @ U.T


def solve_least_squares(X, y):
    """Minimise ``||y - X beta||^2``.

    Uses the normal equations with a Cholesky factorisation when ``X`` has
    comfortably full column rank, otherwise the minimum-norm solution from
    the pseudo-inverse.
    """
    X = as_matrix(X)
    y = as_vector(y)
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise LinAlgError("empty design matrix")
    if X.shape[0] != y.shape[0]:
        raise LinAlgError(f"dimension mismatch: X has {X.shape[0]} rows, y has {y.shape[0]}")
    if X.shape[0] >= X.shape[1]:
        G = X.T @ X
        try:
            L = _cholesky(G, pivot_ratio=_PIVOT_RATIO)
        except NotPositiveDefiniteError:
            pass
        else:
            z = solve_triangular(L, X.T @ y, lower=True)
            return solve_triangular(L.T, z, lower=False)
    return pseudo_inverse(X) @ y
