"""Masked-matrix data model, projection operators, norms, and file I/O.

An incomplete matrix is stored densely: a value array with zeros at
unobserved positions, plus a boolean mask (True = observed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class MatrixFormatError(ValueError):
    """Malformed observed-matrix file (bad line, bad index, duplicate entry)."""


@dataclass(frozen=True)
class ObservedMatrix:
    """Dense storage of the observed entries of an m-by-n matrix."""

    values: np.ndarray  # m x n, zero wherever mask is False
    mask: np.ndarray    # m x n boolean

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        mask = np.asarray(self.mask, dtype=bool)
        if values.ndim != 2 or values.shape != mask.shape:
            raise ValueError("values and mask must be 2-D arrays of the same shape")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError("matrix dimensions must be at least 1x1")
        if not np.all(np.isfinite(values)):
            raise ValueError("observed values must be finite")
        if np.any(values[~mask] != 0.0):
            raise ValueError("unobserved positions must store 0")
        if not mask.any():
            raise ValueError("at least one entry must be observed")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def observed_count(self) -> int:
        return int(self.mask.sum())

    @classmethod
    def from_dense(cls, X, mask) -> "ObservedMatrix":
        """Build from a dense matrix by masking out the unobserved entries."""
        mask = np.asarray(mask, dtype=bool)
        return cls(values=project_omega(np.asarray(X, dtype=float), mask), mask=mask)


def project_omega(X, mask):
    """Keep entries at observed positions, zero elsewhere."""
    X = np.asarray(X, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if X.shape != mask.shape:
        raise ValueError(f"shape mismatch: {X.shape} vs {mask.shape}")
    return np.where(mask, X, 0.0)


def project_column(v, mask, j):
    """Keep the entries of v observed in column j of the mask, zero elsewhere."""
    v = np.asarray(v, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if not 0 <= j < mask.shape[1]:
        raise IndexError(f"column index {j} out of range for {mask.shape[1]} columns")
    if v.shape != (mask.shape[0],):
        raise ValueError(f"vector length {v.shape} does not match row count {mask.shape[0]}")
    return np.where(mask[:, j], v, 0.0)


def frobenius_sq(X) -> float:
    """Sum of squared entries."""
    X = np.asarray(X, dtype=float)
    return float(np.sum(X * X))


def read_observed(path) -> ObservedMatrix:
    """Parse an observed-matrix text file.

    Format: first nonempty line is ``m n``; every following nonempty line is
    ``i j value`` with 1-based indices. Lines starting with ``#`` are skipped.
    Duplicate (i, j) entries are rejected.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()

    header = None
    entries = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise MatrixFormatError(f"line {lineno}: expected 'm n' header, got {line!r}")
            try:
                m, n = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise MatrixFormatError(f"line {lineno}: non-integer dimensions") from exc
            if m < 1 or n < 1:
                raise MatrixFormatError(f"line {lineno}: dimensions must be positive")
            header = (m, n)
            continue
        if len(parts) != 3:
            raise MatrixFormatError(f"line {lineno}: expected 'i j value', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            value = float(parts[2])
        except ValueError as exc:
            raise MatrixFormatError(f"line {lineno}: could not parse entry") from exc
        entries.append((lineno, i, j, value))

    if header is None:
        raise MatrixFormatError("missing 'm n' header line")
    m, n = header
    values = np.zeros((m, n))
    mask = np.zeros((m, n), dtype=bool)
    for lineno, i, j, value in entries:
        if not (1 <= i <= m and 1 <= j <= n):
            raise MatrixFormatError(f"line {lineno}: index ({i},{j}) out of range for {m}x{n}")
        if mask[i - 1, j - 1]:
            raise MatrixFormatError(f"line {lineno}: duplicate entry ({i},{j})")
        mask[i - 1, j - 1] = True
        values[i - 1, j - 1] = value
    if not mask.any():
        raise MatrixFormatError("no observed entries")
    return ObservedMatrix(values=values, mask=mask)


def write_observed(path, obs: ObservedMatrix):
    """Write an ObservedMatrix in the text format accepted by read_observed."""
    rows, cols = np.nonzero(obs.mask)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{obs.m} {obs.n}\n")
        for i, j in zip(rows, cols):
            fh.write(f"{i + 1} {j + 1} {float(obs.values[i, j])!r}\n")


def write_dense(path, X):
    """Write a dense matrix as CSV with full double precision."""
    X = np.asarray(X, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        for row in X:
            fh.write(",".join(format(x, ".17g") for x in row))
            fh.write("\n")
