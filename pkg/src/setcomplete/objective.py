"""Objective function for consistent completion over a candidate column space.

f(U) is the squared Frobenius norm of the residual after fitting each
observed column of X, in least squares, within span(U) restricted to the
column's observed rows. The objective decouples into per-column atomic
values, which makes the fit an independent small solve per column.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_core import ObservedMatrix

_EPS = np.finfo(float).eps


class ZeroGradient(Exception):
    """Gradient numerically zero: stationary point (converged or stalled)."""


@dataclass(frozen=True)
class Fit:
    """Least-squares fit of the observations within span(U)."""

    W: np.ndarray         # r x n coefficients (minimum-norm per column)
    residual: np.ndarray  # m x n, zero off the observed set
    f_value: float
    atomic: np.ndarray    # length n, per-column squared residual norms


def fit(U, obs: ObservedMatrix) -> Fit:
    """Fit all columns of the observed matrix in span(U).

    Each column solves min_w ||x_Omega_j - P_Omega_j(U w)||^2 with the
    minimum-norm solution; rank-deficient restricted bases go through the
    pseudoinverse, and fully unobserved columns get w = 0.
    """
    U = np.asarray(U, dtype=float)
    values, mask = obs.values, obs.mask
    m, n = values.shape
    r = U.shape[1]
    if U.shape[0] != m:
        raise ValueError(f"basis has {U.shape[0]} rows, matrix has {m}")

    if r == 1:
        u = U[:, 0]
        num = values.T @ u                       # values are zero off Omega
        den = mask.T @ (u * u)
        w = np.divide(num, den, out=np.zeros(n), where=den > 0)
        W = w[None, :]
    else:
        # Stack the row-restricted bases and solve all columns in one
        # batched SVD (minimum-norm pseudoinverse solution).
        A = U[None, :, :] * mask.T[:, :, None]   # (n, m, r)
        ua, s, vt = np.linalg.svd(A, full_matrices=False)
        cutoff = max(m, r) * _EPS * s[:, :1]
        sinv = np.zeros_like(s)
        np.divide(1.0, s, out=sinv, where=s > cutoff)
        c = np.einsum("jmi,mj->ji", ua, values) * sinv
        W = np.einsum("jki,jk->ij", vt, c)       # (r, n)

    residual = values - mask * (U @ W)
    atomic = np.einsum("ij,ij->j", residual, residual)
    return Fit(W=W, residual=residual, f_value=float(atomic.sum()), atomic=atomic)


def atomic_value(U, obs: ObservedMatrix, j) -> float:
    """Residual of column j alone; independent of all other columns."""
    U = np.asarray(U, dtype=float)
    if not 0 <= j < obs.n:
        raise IndexError(f"column index {j} out of range")
    rows = obs.mask[:, j]
    x = obs.values[rows, j]
    if x.size == 0:
        return 0.0
    A = U[rows, :]
    w, *_ = np.linalg.lstsq(A, x, rcond=None)
    res = x - A @ w
    return float(res @ res)


def gradient(U, ft: Fit):
    """Gradient of f at U: -2 * residual * W^T.

    Coincides with the manifold gradient because the basis is orthogonal to
    the residual at the least-squares optimum.
    """
    return -2.0 * ft.residual @ ft.W.T


@dataclass(frozen=True)
class SearchDirection:
    """Top singular pair of the gradient; descent direction is -h v^T."""

    h: np.ndarray  # unit m-vector
    v: np.ndarray  # unit r-vector
    top_singular_value: float


def search_direction(grad) -> SearchDirection:
    """Rank-one descent direction from the top singular pair of the gradient.

    Raises ZeroGradient when the gradient is numerically zero. The sign of
    (h, v) is fixed so the largest-magnitude entry of h is positive; the
    direction -h v^T is invariant under the joint flip.
    """
    grad = np.asarray(grad, dtype=float)
    gnorm = np.linalg.norm(grad)
    if gnorm == 0.0:
        raise ZeroGradient("gradient is exactly zero")
    u, s, vt = np.linalg.svd(grad, full_matrices=False)
    if s[0] <= 1e-12 * gnorm:
        raise ZeroGradient("top singular value below the zero-gradient floor")
    h = u[:, 0]
    v = vt[0, :]
    k = int(np.argmax(np.abs(h)))
    if h[k] < 0:
        h = -h
        v = -v
    return SearchDirection(h=h, v=v, top_singular_value=float(s[0]))
