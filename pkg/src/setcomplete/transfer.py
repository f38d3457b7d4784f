"""Barrier detection and subspace transfer.

A column's atomic maximizer "forms a barrier" along the current geodesic
when some atomic function that decreases at t=0 has its minimizer beyond
that maximizer, and the full objective is still descending at the
maximizer. The transfer step jumps the basis onto the closest such barrier
short of the nearest admitting column's minimizer, letting the search
continue on the far side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evolution import descent_geodesic
from .extremals import atomic_along, column_extremals, reduce_column
from .grassmann import Rank1Geodesic, eval_rank1, transported_direction
from .matrix_core import ObservedMatrix
from .objective import ZeroGradient, gradient, fit

_FD_STEP = 1e-7        # one-sided step for the atomic-slope probe at t=0
_FD_FLOOR = 1e-12      # slopes smaller than this count as "not consistent"


class EmptyAdmittingSet(Exception):
    """select_transfer called although no column admits a barrier."""


@dataclass(frozen=True)
class BarrierReport:
    extremals: tuple          # per-column ColumnExtremals
    consistent: np.ndarray    # per-column: atomic value decreases at t=0
    barrier_formers: tuple    # column indices whose maximizer forms a barrier
    admitting: tuple          # columns admitting barriers (the set J)
    j_star: int | None
    k_star: int | None
    t_tran: float


def consistency_sign(g: Rank1Geodesic, obs: ObservedMatrix, t) -> float:
    """Inner product of the gradient at U(t) with the transported direction.

    Negative means the objective is still descending at t (the gradients at
    t=0 and t form a sharp angle).
    """
    U_t = eval_rank1(g, t)
    G = gradient(U_t, fit(U_t, obs))
    return float(np.sum(G * transported_direction(g, t)))


def detect_barriers(g: Rank1Geodesic, obs: ObservedMatrix) -> BarrierReport:
    """Evaluate both barrier conditions for every column maximizer."""
    n = obs.n
    reduced = [reduce_column(obs.values[:, j], g, obs.mask[:, j]) for j in range(n)]
    ext = tuple(column_extremals(rc) for rc in reduced)

    consistent = np.zeros(n, dtype=bool)
    for j, rc in enumerate(reduced):
        if ext[j].constant:
            continue
        slope = (atomic_along(rc, _FD_STEP) - atomic_along(rc, 0.0)) / _FD_STEP
        consistent[j] = slope < 0.0 and abs(slope) >= _FD_FLOOR

    # Condition 1: some consistent column j has its minimizer beyond the
    # candidate maximizer, i.e. 0 < t_max_k < t_min_j < t_max_j < pi.
    formers = []
    for k in range(n):
        if ext[k].constant or not 0.0 < ext[k].t_max:
            continue
        cond1 = any(
            consistent[j]
            and ext[k].t_max < ext[j].t_min < ext[j].t_max < np.pi
            for j in range(n)
            if not ext[j].constant
        )
        if not cond1:
            continue
        # Condition 2: the objective is still descending at the maximizer.
        if consistency_sign(g, obs, ext[k].t_max) < 0.0:
            formers.append(k)

    admitting = tuple(
        j
        for j in range(n)
        if not ext[j].constant
        and any(ext[k].t_max < ext[j].t_min < ext[j].t_max for k in formers)
    )

    if not admitting:
        return BarrierReport(ext, consistent, tuple(formers), (), None, None, 0.0)

    j_star, k_star, t_tran = _select(ext, tuple(formers), admitting)
    return BarrierReport(ext, consistent, tuple(formers), admitting, j_star, k_star, t_tran)


def _select(ext, formers, admitting):
    j_star = min(admitting, key=lambda j: (ext[j].t_min, j))
    eligible = [k for k in formers if ext[k].t_max < ext[j_star].t_min]
    k_star = max(eligible, key=lambda k: (ext[k].t_max, -k))
    return j_star, k_star, ext[k_star].t_max


def select_transfer(report: BarrierReport):
    """Pick the transfer target: nearest admitting minimizer, then the
    largest barrier maximizer short of it."""
    if not report.admitting:
        raise EmptyAdmittingSet("no column admits a barrier")
    return _select(report.extremals, report.barrier_formers, report.admitting)


def transfer(U, obs: ObservedMatrix, offset: float = 0.0):
    """One subspace-transfer attempt from basis U.

    Builds the same descent geodesic the evolution step would use, detects
    barriers along it, and relocates the basis onto the closest barrier
    (minus an optional offset). Returns (0, U) unchanged when no barrier is
    found or the gradient vanishes.
    """
    U = np.asarray(U, dtype=float)
    try:
        g, _, _ = descent_geodesic(U, obs)
    except ZeroGradient:
        return 0.0, U
    report = detect_barriers(g, obs)
    if not report.admitting:
        return 0.0, U
    t_tran = max(report.t_tran - offset, 0.0)
    if t_tran == 0.0:
        return 0.0, U
    return t_tran, eval_rank1(g, t_tran)
