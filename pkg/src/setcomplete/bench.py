"""Random-instance generation and recovery-rate sweeps over sampling rates.

Instances are rank-r products U S V^T with Haar-like factors and a full
Gaussian r x r core, observed on a uniformly random index set of fixed
size. A sweep runs independent trials per sampling rate and aggregates
success counts; trial seeds derive from the master seed by counters, so
every trial is individually reproducible and trials can run in parallel.
"""

from __future__ import annotations

import csv
import dataclasses
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .grassmann import random_basis
from .matrix_core import ObservedMatrix
from .solver import SolverConfig, SolverStatus, residual_relative, set_complete


@dataclass(frozen=True)
class InstanceSpec:
    m: int
    n: int
    r: int
    k: int  # number of observed entries
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.r <= min(self.m, self.n):
            raise ValueError("need 1 <= r <= min(m, n)")
        if self.r * (self.m + self.n - self.r) > self.m * self.n:
            raise ValueError("rank too large for the ambient dimensions")
        if not 1 <= self.k <= self.m * self.n:
            raise ValueError("need 1 <= k <= m*n")


def gen_instance(spec: InstanceSpec):
    """Draw a random rank-r matrix and a uniform observation mask.

    Returns (X, mask) with X = U S V^T; S is a full r x r standard-normal
    matrix so the singular values of X are themselves random.
    """
    rng = np.random.default_rng(spec.seed)
    U = random_basis(spec.m, spec.r, rng)
    V = random_basis(spec.n, spec.r, rng)
    S = rng.standard_normal((spec.r, spec.r))
    X = U @ S @ V.T
    flat = rng.permutation(spec.m * spec.n)[: spec.k]
    mask = np.zeros(spec.m * spec.n, dtype=bool)
    mask[flat] = True
    return X, mask.reshape(spec.m, spec.n)


@dataclass(frozen=True)
class TrialResult:
    converged: bool
    iterations: int
    transfers: int
    runtime_s: float


@dataclass(frozen=True)
class SweepRow:
    rate: float
    trials: int
    successes: int
    mean_iterations: float
    mean_transfers: float
    mean_runtime_ms: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    trial_results: dict  # rate -> tuple of TrialResult, in trial order


def _trial_seeds(master_seed, rate_index, trial):
    ss = np.random.SeedSequence([int(master_seed), int(rate_index), int(trial)])
    inst, solve = ss.generate_state(2)
    return int(inst), int(solve)


def _run_trial(args):
    m, n, r, k, rate_index, trial, cfg = args
    inst_seed, solve_seed = _trial_seeds(cfg.seed, rate_index, trial)
    X, mask = gen_instance(InstanceSpec(m=m, n=n, r=r, k=k, seed=inst_seed))
    obs = ObservedMatrix.from_dense(X, mask)
    start = time.perf_counter()
    X_hat, report = set_complete(obs, dataclasses.replace(cfg, seed=solve_seed))
    runtime = time.perf_counter() - start
    # Success is re-verified against the stopping criterion, not just the
    # reported status.
    converged = (
        report.status is SolverStatus.CONVERGED
        and residual_relative(X_hat, obs) <= cfg.epsilon_e
    )
    return TrialResult(
        converged=converged,
        iterations=report.iterations,
        transfers=report.transfers_performed,
        runtime_s=runtime,
    )


def run_sweep(m, n, r, rates, trials, cfg: SolverConfig, jobs: int = 1) -> SweepResult:
    """Run `trials` random completions at each sampling rate.

    The master seed lives in cfg.seed; per-trial seeds are derived from it,
    the rate index, and the trial counter. Identical inputs give identical
    results regardless of jobs.
    """
    rates = [float(x) for x in rates]
    if len(set(rates)) != len(rates):
        raise ValueError("duplicate sampling rates")
    for rate in rates:
        if not 0.0 < rate <= 1.0:
            raise ValueError(f"sampling rate {rate} outside (0, 1]")
    if trials < 1:
        raise ValueError("trials must be at least 1")

    tasks = []
    for rate_index, rate in enumerate(rates):
        k = max(1, min(m * n, round(rate * m * n)))
        for trial in range(trials):
            tasks.append((m, n, r, k, rate_index, trial, cfg))

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_trial, tasks))
    else:
        results = [_run_trial(t) for t in tasks]

    rows = []
    per_rate = {}
    for rate_index, rate in enumerate(rates):
        chunk = results[rate_index * trials : (rate_index + 1) * trials]
        per_rate[rate] = tuple(chunk)
        rows.append(
            SweepRow(
                rate=rate,
                trials=trials,
                successes=sum(t.converged for t in chunk),
                mean_iterations=float(np.mean([t.iterations for t in chunk])),
                mean_transfers=float(np.mean([t.transfers for t in chunk])),
                mean_runtime_ms=float(np.mean([t.runtime_s for t in chunk])) * 1e3,
            )
        )
    return SweepResult(rows=tuple(rows), trial_results=per_rate)


def write_sweep_csv(path, result: SweepResult):
    """Emit one CSV row per rate; only the runtime column is timing-dependent."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["rate", "trials", "successes", "mean_iters", "mean_transfers", "mean_runtime_ms"]
        )
        for row in result.rows:
            writer.writerow(
                [
                    format(row.rate, "g"),
                    row.trials,
                    row.successes,
                    format(row.mean_iterations, ".6g"),
                    format(row.mean_transfers, ".6g"),
                    format(row.mean_runtime_ms, ".6g"),
                ]
            )
