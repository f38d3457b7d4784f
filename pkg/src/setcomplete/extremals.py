"""Per-column analysis of the objective along a rank-one geodesic.

Restricted to one column's observed rows, the moving basis column traces
u(t) = u_r*cos(t) + h_r*sin(t) after the static trailing columns are
projected out. The resulting scalar function
    f(t) = ||x_r - P(x_r, u(t))||^2
is either constant or pi-periodic with a unique minimizer and maximizer per
period, both available in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grassmann import Rank1Geodesic

_DEP_TOL = 1e-10
_ORTH_TOL = 1e-10


def atan_pi(x1, x2) -> float:
    """Angle in [0, pi) with tan(angle) = x1/x2.

    Branches: pi/2 when x2 == 0; arctan(x1/x2) when the ratio is
    nonnegative; pi - arctan(-x1/x2) when the ratio is negative.
    """
    if x2 == 0.0:
        return np.pi / 2.0
    ratio = x1 / x2
    if ratio >= 0.0:
        return float(np.arctan(ratio))
    return float(np.pi - np.arctan(-ratio))


@dataclass(frozen=True)
class ReducedColumn:
    """Column data with the static restricted columns projected out."""

    x_r: np.ndarray  # observed column residualized against trailing columns
    u_r: np.ndarray  # restricted moving column, residualized
    h_r: np.ndarray  # restricted direction, residualized


def _project_onto(y, B):
    """Projection of y onto span(B) via minimum-norm least squares."""
    if B.shape[1] == 0:
        return np.zeros_like(y)
    c, *_ = np.linalg.lstsq(B, y, rcond=None)
    return B @ c


def reduce_column(x, g: Rank1Geodesic, col_mask) -> ReducedColumn:
    """Restrict column data to observed rows and remove the static part.

    x is the full-length column; col_mask the boolean observation pattern
    for that column. The trailing (static) restricted columns are projected
    out of the observed column, the moving column, and the direction, so the
    restricted residual at any t reduces to a single-vector projection.
    """
    x = np.asarray(x, dtype=float)
    keep = np.asarray(col_mask, dtype=float)
    x_o = x * keep
    u1_o = g.rotated_basis[:, 0] * keep
    h_o = g.direction * keep
    trailing = g.rotated_basis[:, 1:] * keep[:, None]
    return ReducedColumn(
        x_r=x_o - _project_onto(x_o, trailing),
        u_r=u1_o - _project_onto(u1_o, trailing),
        h_r=h_o - _project_onto(h_o, trailing),
    )


def atomic_along(rc: ReducedColumn, t) -> float:
    """f(t) = ||x_r - P(x_r, u_r*cos(t) + h_r*sin(t))||^2."""
    u = rc.u_r * np.cos(t) + rc.h_r * np.sin(t)
    uu = u @ u
    if uu == 0.0:
        return float(rc.x_r @ rc.x_r)
    res = rc.x_r - (rc.x_r @ u / uu) * u
    return float(res @ res)


@dataclass(frozen=True)
class ColumnExtremals:
    """Closed-form extremals of one atomic function over [0, pi)."""

    constant: bool
    t_min: float
    t_max: float
    f_min: float
    f_max: float


def column_extremals(rc: ReducedColumn) -> ColumnExtremals:
    """Locate the unique minimizer and maximizer of the atomic function.

    Constant cases: u_r and h_r linearly dependent, or x_r orthogonal to
    both (detected with scale-invariant tolerances). Otherwise the minimizer
    is the alignment angle of u(t) with the in-plane component of x_r, and
    the maximizer is the angle at which u(t) is orthogonal to x_r.
    """
    x_r, u_r, h_r = rc.x_r, rc.u_r, rc.h_r
    nx = np.linalg.norm(x_r)
    B = np.stack([u_r, h_r], axis=1)
    sv = np.linalg.svd(B, compute_uv=False)
    dependent = sv[-1] <= _DEP_TOL * max(sv[0], 1.0)
    xu = float(x_r @ u_r)
    xh = float(x_r @ h_r)
    scale = nx * max(np.linalg.norm(u_r), np.linalg.norm(h_r))
    orthogonal = abs(xu) <= _ORTH_TOL * scale and abs(xh) <= _ORTH_TOL * scale
    if dependent or orthogonal or nx == 0.0:
        f0 = atomic_along(rc, 0.0)
        return ColumnExtremals(constant=True, t_min=0.0, t_max=0.0, f_min=f0, f_max=f0)

    c, *_ = np.linalg.lstsq(B, x_r, rcond=None)
    t_min = atan_pi(c[1], c[0])      # u(t) aligned with the in-plane part of x_r
    t_max = atan_pi(xu, -xh)         # u(t) orthogonal to x_r
    return ColumnExtremals(
        constant=False,
        t_min=t_min,
        t_max=t_max,
        f_min=atomic_along(rc, t_min),
        f_max=atomic_along(rc, t_max),
    )
