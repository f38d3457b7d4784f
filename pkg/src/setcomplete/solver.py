"""Outer completion loop: transfer, evolve, test the stopping criterion.

Each iteration optionally performs one subspace transfer, then one
subspace-evolution (line search) step, then rebuilds the completed matrix
and tests observed-entry consistency. Iteration caps and stall detection
are safeguards on top of the core loop, which would otherwise run
unconditionally.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .evolution import LineSearchConfig, evolve
from .grassmann import random_basis
from .matrix_core import ObservedMatrix, frobenius_sq, project_omega
from .objective import ZeroGradient, fit
from .transfer import transfer


class SolverStatus(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    STALLED = "stalled"


@dataclass(frozen=True)
class SolverConfig:
    rank: int
    epsilon_e: float = 1e-6
    line_search: LineSearchConfig = field(default_factory=LineSearchConfig)
    max_outer_iters: int = 1000
    stall_window: int = 50
    stall_rel_decrease: float = 1e-12
    transfer_enabled: bool = True
    seed: int = 0
    transfer_offset: float = 0.0

    def __post_init__(self):
        if self.epsilon_e <= 0.0:
            raise ValueError("epsilon_e must be positive")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be at least 1")


@dataclass
class SolverReport:
    status: SolverStatus
    iterations: int
    transfers_performed: int
    f_trajectory: list
    final_f: float
    elapsed: float
    monotone: bool  # recorded (post-evolution) trajectory never increased


def residual_relative(X_hat, obs: ObservedMatrix) -> float:
    """||X_Omega - P_Omega(X_hat)||_F^2 / ||X_Omega||_F^2."""
    X_hat = np.asarray(X_hat, dtype=float)
    if X_hat.shape != obs.values.shape:
        raise ValueError("shape mismatch between estimate and observations")
    denom = frobenius_sq(obs.values)
    if denom == 0.0:
        raise ValueError("observed entries have zero norm")
    return frobenius_sq(obs.values - project_omega(X_hat, obs.mask)) / denom


def set_complete(obs: ObservedMatrix, cfg: SolverConfig):
    """Run the full completion loop from a random initial column space.

    Returns (X_hat, report). X_hat is the best consistent estimate found:
    the converged completion, or the best-so-far iterate on an iteration cap
    or stall.
    """
    if not 1 <= cfg.rank <= min(obs.m, obs.n):
        raise ValueError(f"rank must be in [1, {min(obs.m, obs.n)}], got {cfg.rank}")
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    U = random_basis(obs.m, cfg.rank, rng)

    threshold = cfg.epsilon_e * frobenius_sq(obs.values)
    trajectory = []
    transfer_history = []
    transfers = 0
    monotone = True
    best_f = np.inf
    best_U = U

    status = SolverStatus.MAX_ITERS
    iterations = 0
    for iterations in range(1, cfg.max_outer_iters + 1):
        transferred = False
        if cfg.transfer_enabled:
            t_tran, U = transfer(U, obs, offset=cfg.transfer_offset)
            if t_tran > 0.0:
                transfers += 1
                transferred = True
        try:
            result = evolve(U, obs, cfg.line_search)
            U = result.basis_at_t
            f_value = result.f_after
        except ZeroGradient:
            f_value = fit(U, obs).f_value

        if trajectory and f_value > trajectory[-1] * (1.0 + 1e-10) + 1e-300:
            monotone = False
        trajectory.append(f_value)
        transfer_history.append(transferred)
        if f_value < best_f:
            best_f = f_value
            best_U = U

        if f_value <= threshold:
            status = SolverStatus.CONVERGED
            break

        window = cfg.stall_window
        if len(trajectory) > window and not any(transfer_history[-window:]):
            recent = trajectory[-window - 1:]
            decreases = [
                (a - b) / max(a, 1e-300) for a, b in zip(recent[:-1], recent[1:])
            ]
            if all(d < cfg.stall_rel_decrease for d in decreases):
                status = SolverStatus.STALLED
                break

    if status is not SolverStatus.CONVERGED:
        U = best_U
    final_fit = fit(U, obs)
    X_hat = U @ final_fit.W
    report = SolverReport(
        status=status,
        iterations=iterations,
        transfers_performed=transfers,
        f_trajectory=trajectory,
        final_f=final_fit.f_value,
        elapsed=time.perf_counter() - start,
        monotone=monotone,
    )
    return X_hat, report
