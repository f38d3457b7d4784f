"""Points and geodesics on the Grassmann manifold.

A point is represented by an m-by-r generator matrix with orthonormal
columns. Geodesics come in two forms: the general SVD-based curve, and a
rank-one form that rotates only the first column of a suitably rotated
basis through an angle t. The solver uses the rank-one form exclusively;
the general form exists for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORTHO_TOL = 1e-10
# Looser than the assembly tolerance: the direction vector arrives from an
# SVD of a residual product.
DIRECTION_ORTHO_TOL = 1e-8


class RankDeficientError(ValueError):
    """Input matrix does not have full column rank."""


def orthonormalize(A):
    """Return an orthonormal basis of span(A) via QR with positive R diagonal.

    Raises RankDeficientError when the smallest singular value of A is below
    1e-12 times the largest.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[1] > A.shape[0]:
        raise ValueError("expected an m x r matrix with r <= m")
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise RankDeficientError("matrix is numerically rank deficient")
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def random_basis(m, r, rng):
    """Haar-like random point: orthonormalize an i.i.d. Gaussian m x r matrix."""
    if not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= m, got r={r}, m={m}")
    return orthonormalize(rng.standard_normal((m, r)))


def check_orthonormal(U, tol=ORTHO_TOL):
    U = np.asarray(U)
    gram = U.T @ U
    return np.linalg.norm(gram - np.eye(U.shape[1])) <= tol


def _householder_completion(v):
    """Deterministic orthogonal r x r matrix whose first column is v.

    Reflector mapping e1 to v; identity when v is (numerically) e1.
    """
    v = np.asarray(v, dtype=float)
    r = v.shape[0]
    e1 = np.zeros(r)
    e1[0] = 1.0
    w = e1 - v
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        return np.eye(r)
    w = w / nw
    return np.eye(r) - 2.0 * np.outer(w, w)


@dataclass(frozen=True)
class Rank1Geodesic:
    """Rank-one geodesic: only the first column of rotated_basis moves.

    U(t) = [u1*cos(t) + h*sin(t), u2, ..., ur] where u_i are the columns of
    rotated_basis and h is a unit direction orthogonal to all of them.
    """

    rotated_basis: np.ndarray  # m x r, orthonormal columns
    direction: np.ndarray      # unit m-vector, orthogonal to rotated_basis


def make_rank1_geodesic(U, h, v):
    """Build the rank-one geodesic from basis U, direction h and rotation axis v.

    h must be a unit vector orthogonal to span(U); v a unit r-vector. The
    basis is rotated by a deterministic orthogonal completion of v so that
    its first column becomes U @ v.
    """
    U = np.asarray(U, dtype=float)
    h = np.asarray(h, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(h) - 1.0) > 1e-8 or abs(np.linalg.norm(v) - 1.0) > 1e-8:
        raise ValueError("h and v must be unit vectors")
    if np.linalg.norm(U.T @ h) > DIRECTION_ORTHO_TOL:
        raise ValueError("direction h is not orthogonal to span(U)")
    V = _householder_completion(v)
    return Rank1Geodesic(rotated_basis=U @ V, direction=h)


def eval_rank1(g: Rank1Geodesic, t):
    """Evaluate the rank-one geodesic at angle t; result is re-orthonormalized."""
    out = g.rotated_basis.copy()
    out[:, 0] = g.rotated_basis[:, 0] * np.cos(t) + g.direction * np.sin(t)
    # Analytically orthonormal already; QR only suppresses fp drift.
    return orthonormalize(out)


def transported_direction(g: Rank1Geodesic, t):
    """Parallel transport of the search direction along the curve.

    H(t) = [-u1*sin(t) + h*cos(t), 0, ..., 0].
    """
    out = np.zeros_like(g.rotated_basis)
    out[:, 0] = -g.rotated_basis[:, 0] * np.sin(t) + g.direction * np.cos(t)
    return out


@dataclass(frozen=True)
class GeneralGeodesic:
    """General geodesic from a base point and the compact SVD of a direction."""

    base: np.ndarray  # m x r orthonormal
    U_H: np.ndarray   # m x r
    s: np.ndarray     # r singular values, descending
    V_H: np.ndarray   # r x r orthogonal


def make_general_geodesic(U, H):
    """General geodesic from basis U along tangent direction H (m x r)."""
    U = np.asarray(U, dtype=float)
    H = np.asarray(H, dtype=float)
    U_H, s, V_Ht = np.linalg.svd(H, full_matrices=False)
    return GeneralGeodesic(base=U, U_H=U_H, s=s, V_H=V_Ht.T)


def eval_general(g: GeneralGeodesic, t):
    """U(t) = [U V_H, U_H] [cos(St); sin(St)] V_H^T, re-orthonormalized."""
    cos_st = np.diag(np.cos(g.s * t))
    sin_st = np.diag(np.sin(g.s * t))
    left = np.hstack([g.base @ g.V_H, g.U_H])
    mid = np.vstack([cos_st, sin_st])
    return orthonormalize(left @ mid @ g.V_H.T)
