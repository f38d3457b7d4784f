"""Geodesic line search: exponential bracketing plus golden-section refinement.

The bracket stage probes t = eps*pi, c2*eps*pi, c2^2*eps*pi, ... and stops at
the first probe where f rose (or at pi). The refinement stage runs a fixed
number of golden-section iterations on [0, t_bracket] and returns the best
probed point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grassmann import Rank1Geodesic, eval_rank1, make_rank1_geodesic
from .matrix_core import ObservedMatrix
from .objective import ZeroGradient, fit, gradient, search_direction

_C1 = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LineSearchConfig:
    epsilon: float = 1e-9           # initial step as a fraction of pi
    c1: float = _C1                 # golden ratio constant
    c2: float = _C1 / (1.0 - _C1)   # bracket growth factor
    itN: int = 10                   # golden-section iterations

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        if not 0.0 < self.c1 < 1.0:
            raise ValueError("c1 must be in (0, 1)")
        if self.c2 <= 1.0:
            raise ValueError("c2 must exceed 1")
        if self.itN < 1:
            raise ValueError("itN must be at least 1")


@dataclass(frozen=True)
class EvolutionResult:
    t_star: float
    basis_at_t: np.ndarray
    f_before: float
    f_after: float
    evaluations: int


class _Memo:
    """Caches f(t) so repeated probes of the same angle cost nothing."""

    def __init__(self, fun):
        self.fun = fun
        self.cache = {}
        self.calls = 0

    def __call__(self, t):
        if t not in self.cache:
            self.cache[t] = self.fun(t)
            self.calls += 1
        return self.cache[t]


def bracket_scalar(f, cfg: LineSearchConfig) -> float:
    """Find t_bracket in (0, pi] bounding the neighboring minimizer of f."""
    t_prev = cfg.epsilon * np.pi
    f_prev = f(t_prev)
    while True:
        t_next = cfg.c2 * t_prev
        if t_next > np.pi:
            return np.pi
        f_next = f(t_next)
        if f_next > f_prev:
            return t_next
        t_prev, f_prev = t_next, f_next


def golden_section_scalar(f, t_bracket, cfg: LineSearchConfig) -> float:
    """Fixed-iteration golden-section refinement on [0, t_bracket].

    Returns the best of the four live probe points; ties go to the smallest
    angle.
    """
    if not 0.0 < t_bracket <= np.pi:
        raise ValueError("t_bracket must be in (0, pi]")
    t1 = t_bracket / cfg.c2 ** 2
    t2 = t_bracket / cfg.c2
    t4 = t_bracket
    t3 = t1 + cfg.c1 * (t4 - t1)
    for _ in range(cfg.itN):
        if f(t1) > f(t2) > f(t3):
            t1, t2 = t2, t3
            t3 = t1 + cfg.c1 * (t4 - t1)
        else:
            t4, t3 = t3, t2
            t2 = t1 + (1.0 - cfg.c1) * (t4 - t1)
    candidates = sorted({t1, t2, t3, t4})
    return min(candidates, key=lambda t: (f(t), t))


def _objective_along(g: Rank1Geodesic, obs: ObservedMatrix) -> _Memo:
    return _Memo(lambda t: fit(eval_rank1(g, t), obs).f_value)


def descent_geodesic(U, obs: ObservedMatrix, ft=None):
    """Rank-one descent geodesic at U. Returns (geodesic, fit, direction).

    Raises ZeroGradient when the gradient is negligible at the problem's
    scale (||grad|| <= 2 ||X_Omega|| (1 + ||W||) * 1e-12); a pure relative
    test on the gradient alone would accept round-off noise at an exact
    solution and hand the SVD a meaningless direction.
    """
    U = np.asarray(U, dtype=float)
    if ft is None:
        ft = fit(U, obs)
    grad = gradient(U, ft)
    scale = 2.0 * np.linalg.norm(obs.values) * (1.0 + np.linalg.norm(ft.W))
    if np.linalg.norm(grad) <= 1e-12 * scale:
        raise ZeroGradient("gradient negligible at problem scale")
    sd = search_direction(grad)
    # Guard against residual non-orthogonality leaking into h.
    h = sd.h - U @ (U.T @ sd.h)
    norm_h = np.linalg.norm(h)
    if norm_h <= 0.5:
        raise ZeroGradient("search direction collapsed into span(U)")
    return make_rank1_geodesic(U, -h / norm_h, sd.v), ft, sd


def bracket(g: Rank1Geodesic, obs: ObservedMatrix, cfg: LineSearchConfig) -> float:
    return bracket_scalar(_objective_along(g, obs), cfg)


def golden_section(g, obs, t_bracket, cfg: LineSearchConfig) -> float:
    return golden_section_scalar(_objective_along(g, obs), t_bracket, cfg)


def evolve(U, obs: ObservedMatrix, cfg: LineSearchConfig = LineSearchConfig()) -> EvolutionResult:
    """One subspace-evolution step: gradient, rank-one geodesic, line search.

    Raises ZeroGradient (from search_direction) at stationary points. The
    returned step never increases f: if every probed angle is worse than the
    start, t_star falls back to 0.
    """
    # Descent direction is -h v^T, so the moving column heads toward -h.
    g, ft, _ = descent_geodesic(U, obs)
    U = np.asarray(U, dtype=float)
    f_along = _objective_along(g, obs)
    t_bracket = bracket_scalar(f_along, cfg)
    t_star = golden_section_scalar(f_along, t_bracket, cfg)
    f_after = f_along(t_star)
    if f_after >= ft.f_value:
        return EvolutionResult(0.0, U, ft.f_value, ft.f_value, f_along.calls)
    return EvolutionResult(
        t_star=t_star,
        basis_at_t=eval_rank1(g, t_star),
        f_before=ft.f_value,
        f_after=f_after,
        evaluations=f_along.calls,
    )
