"""High-dimensional neighbor affinities from a distance kernel.

Each row i of the kernel gets a Gaussian bandwidth sigma_i, found by binary
search so that the conditional neighbor distribution

    p(j|i) = exp(-K_ij^2 / 2 sigma_i^2) / sum_{k != i} exp(-K_ik^2 / 2 sigma_i^2)

has effective neighbor count 2^H equal to the requested perplexity (H is the
Shannon entropy in bits). The conditionals are then symmetrized into the
joint matrix p_ij = (p(j|i) + p(i|j)) / 2N, which sums to one over all pairs.

The kernel stores plain distances; squaring happens here. Computation shifts
by the per-row max exponent so no row under- or overflows.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .types import DistanceKernel, _readonly

SIGMA_BRACKET = (1e-20, 1e20)
MAX_BISECTIONS = 64
PERPLEXITY_TOL = 1e-5


@dataclass(frozen=True)
class SigmaVector:
    """Per-row Gaussian bandwidths."""

    sigma: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("sigma must be a non-empty 1-D array")
        if not np.all(np.isfinite(s)) or s.min() <= 0:
            raise ValueError("sigmas must be positive and finite")
        object.__setattr__(self, "sigma", _readonly(s))


@dataclass(frozen=True)
class AffinityMatrix:
    """Symmetric joint neighbor probabilities; off-diagonal entries sum to 1."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        n = p.shape[0]
        if p.ndim != 2 or p.shape != (n, n):
            raise ValueError(f"affinity matrix must be square, got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("non-finite affinity")
        if p.min(initial=0.0) < 0:
            raise ValueError("negative affinity")
        if np.abs(np.diagonal(p)).max(initial=0.0) != 0.0:
            raise ValueError("affinity diagonal must be zero")
        if np.abs(p - p.T).max(initial=0.0) > 1e-12:
            raise ValueError("affinity matrix must be symmetric")
        total = p.sum()
        if abs(total - 1.0) > 1e-8:
            raise ValueError(f"affinities must sum to 1, got {total!r}")
        object.__setattr__(self, "p", _readonly(p))

    @property
    def n(self) -> int:
        return self.p.shape[0]


def _row_conditional(sq_row: np.ndarray, self_index: int, sigma: float) -> np.ndarray:
    """Conditional distribution over j != self for one row of squared distances."""
    logits = -sq_row / (2.0 * sigma * sigma)
    logits[self_index] = -np.inf
    shifted = np.exp(logits - logits.max())
    total = shifted.sum()
    if total <= 0 or not np.isfinite(total):
        raise FloatingPointError("row collapsed")
    return shifted / total


def _row_perplexity(cond: np.ndarray) -> float:
    nz = cond[cond > 0]
    h = float(-(nz * np.log2(nz)).sum())
    return 2.0**h


def calibrate_sigma(dist_row: np.ndarray, self_index: int, perplexity: float) -> float:
    """Bandwidth whose conditional distribution hits the target perplexity.

    Bisects log(sigma) over a bracket wide enough for any double-precision
    kernel, stopping when 2^H is within 1e-5 of the target or after 64 steps;
    an unmet tolerance returns the best sigma seen, with a warning.
    """
    row = np.asarray(dist_row, dtype=float)
    n = row.shape[0]
    if not perplexity < n:
        raise ValueError(f"perplexity {perplexity} must be below the number of objects {n}")
    off = np.delete(row, self_index)
    if off.size == 0 or off.max() <= 0:
        raise ValueError("degenerate row: all off-diagonal distances are zero")
    sq = row * row

    lo, hi = np.log(SIGMA_BRACKET[0]), np.log(SIGMA_BRACKET[1])
    best_sigma, best_err = None, np.inf
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        sigma = np.exp(mid)
        perp = _row_perplexity(_row_conditional(sq, self_index, sigma))
        err = abs(perp - perplexity)
        if err < best_err:
            best_sigma, best_err = sigma, err
        if err <= PERPLEXITY_TOL:
            return sigma
        if perp > perplexity:
            hi = mid
        else:
            lo = mid
    warnings.warn(
        f"perplexity search ended {best_err:g} away from target {perplexity} "
        f"after {MAX_BISECTIONS} bisections",
        RuntimeWarning,
        stacklevel=2,
    )
    return float(best_sigma)


def calibrate_sigmas(k: DistanceKernel, perplexity: float) -> SigmaVector:
    return SigmaVector(np.array(
        [calibrate_sigma(k.dist[i], i, perplexity) for i in range(k.n)]
    ))


def conditional_p(k: DistanceKernel, sigmas: SigmaVector) -> np.ndarray:
    """Row-stochastic conditional neighbor matrix; zero diagonal."""
    if sigmas.sigma.shape[0] != k.n:
        raise ValueError("sigma count does not match kernel size")
    sq = k.dist * k.dist
    logits = -sq / (2.0 * sigmas.sigma[:, None] ** 2)
    np.fill_diagonal(logits, -np.inf)
    shifted = np.exp(logits - logits.max(axis=1, keepdims=True))
    totals = shifted.sum(axis=1, keepdims=True)
    if not np.all(totals > 0) or not np.all(np.isfinite(totals)):
        bad = int(np.argmin(totals))
        raise FloatingPointError(f"row {bad} collapsed while normalizing")
    return shifted / totals


def joint_p(cond: np.ndarray) -> AffinityMatrix:
    """Symmetrize conditionals into the joint affinity matrix."""
    cond = np.asarray(cond, dtype=float)
    n = cond.shape[0]
    row_sums = cond.sum(axis=1)
    if np.abs(row_sums - 1.0).max(initial=0.0) > 1e-8:
        raise ValueError("input is not row-stochastic")
    return AffinityMatrix((cond + cond.T) / (2.0 * n))


def affinity_matrix(k: DistanceKernel, perplexity: float) -> AffinityMatrix:
    """Kernel to joint affinities in one step (calibrate, condition, symmetrize)."""
    return joint_p(conditional_p(k, calibrate_sigmas(k, perplexity)))
