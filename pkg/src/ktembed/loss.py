"""Cost and gradient evaluation for the neighbor, triplet, and combined losses.

Three pieces:

  * the KL neighbor loss between the joint affinities and a Student-t kernel
    over the embedding (heavy low-dimensional tails),
  * the triplet negative log-likelihood under the Student-t triplet model,
    plus the crowd-kernel probability model it coincides with at alpha=mu=1,
  * their convex combination, weighted by `triplet_weight`.

The triplet log-likelihood is a quantity to maximize as usually written; we
carry its negative so that both terms are minimized by descent and the
combination has a single sign convention.

Everything here is a pure function of read-only inputs and is safe to call
concurrently. Pairwise distances go through scipy's cdist and accumulation
through einsum/bincount, which keeps results independent of BLAS thread
count; evaluation is dense and exact, sized for a few thousand points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .affinity import AffinityMatrix
from .types import Embedding, Triplet, TripletSet

PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class CostGrad:
    cost: float
    grad: np.ndarray

    def __post_init__(self):
        if not np.isfinite(self.cost) or not np.all(np.isfinite(self.grad)):
            raise FloatingPointError("non-finite cost or gradient")


def as_coords(y: Embedding | np.ndarray) -> np.ndarray:
    coords = y.coords if isinstance(y, Embedding) else np.asarray(y, dtype=float)
    if coords.ndim != 2:
        raise ValueError("coordinates must be an (N, d) array")
    return coords


def pairwise_sq_dists(coords: np.ndarray) -> np.ndarray:
    return cdist(coords, coords, "sqeuclidean")


def student_t_q(y: Embedding | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Student-t low-dimensional affinities.

    Returns (q, unnorm): `unnorm` holds the raw (1 + ||y_i - y_j||^2)^-1
    terms with a zero diagonal, reused by the gradient; `q` is unnorm divided
    by its total, a symmetric zero-diagonal matrix summing to 1.
    """
    coords = as_coords(y)
    if coords.shape[0] < 2:
        raise ValueError("need at least 2 points")
    unnorm = 1.0 / (1.0 + pairwise_sq_dists(coords))
    np.fill_diagonal(unnorm, 0.0)
    return unnorm / unnorm.sum(), unnorm


def kl_cost(p: np.ndarray, q: np.ndarray) -> float:
    """sum_{i != j} p log(p/q), both matrices floored at 1e-12 off-diagonal."""
    n = p.shape[0]
    off = ~np.eye(n, dtype=bool)
    pf = np.maximum(p[off], PROB_FLOOR)
    qf = np.maximum(q[off], PROB_FLOOR)
    return float(np.sum(pf * (np.log(pf) - np.log(qf))))


def tsne_cost_grad(
    p: AffinityMatrix,
    y: Embedding | np.ndarray,
    precomputed_q: tuple[np.ndarray, np.ndarray] | None = None,
) -> CostGrad:
    """KL divergence between affinities and the Student-t embedding kernel.

    The gradient is the exact analytic form
    4 * sum_j (p_ij - q_ij) (1 + ||y_i - y_j||^2)^-1 (y_i - y_j).
    `precomputed_q` takes the (q, unnorm) pair from `student_t_q` when the
    caller already has it for this y.
    """
    coords = as_coords(y)
    if p.n != coords.shape[0]:
        raise ValueError(f"affinity size {p.n} does not match {coords.shape[0]} points")
    q, unnorm = precomputed_q if precomputed_q is not None else student_t_q(coords)
    w = (p.p - q) * unnorm
    grad = 4.0 * (w.sum(axis=1)[:, None] * coords - np.einsum("ij,jd->id", w, coords))
    return CostGrad(kl_cost(p.p, q), grad)


def _triplet_sq_dists(coords: np.ndarray, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    yi, yj, yk = coords[idx[:, 0]], coords[idx[:, 1]], coords[idx[:, 2]]
    return ((yi - yj) ** 2).sum(axis=1), ((yi - yk) ** 2).sum(axis=1)


def _tste_neg_log_probs(
    coords: np.ndarray, idx: np.ndarray, alpha: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-triplet -log p plus the Student-t bases (1 + d^2/alpha) for j and k."""
    d_ij, d_ik = _triplet_sq_dists(coords, idx)
    base_j = 1.0 + d_ij / alpha
    base_k = 1.0 + d_ik / alpha
    expo = -(1.0 + alpha) / 2.0
    log_uj = expo * np.log(base_j)
    log_uk = expo * np.log(base_k)
    neg_log_p = np.logaddexp(log_uj, log_uk) - log_uj
    return neg_log_p, base_j, base_k


def tste_prob(y: Embedding | np.ndarray, t: Triplet, alpha: float = 1.0) -> float:
    """Probability that the embedding satisfies one triplet, Student-t model."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    coords = as_coords(y)
    idx = np.array([[t.i, t.j, t.k]])
    neg_log_p, _, _ = _tste_neg_log_probs(coords, idx, alpha)
    return float(np.exp(-neg_log_p[0]))


def ckl_prob(y: Embedding | np.ndarray, t: Triplet, mu: float = 1.0) -> float:
    """Crowd-kernel satisfaction probability (mu + d_ik^2)/(2 mu + d_ij^2 + d_ik^2).

    Coincides with `tste_prob` at alpha = 1, mu = 1.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    coords = as_coords(y)
    idx = np.array([[t.i, t.j, t.k]])
    d_ij, d_ik = _triplet_sq_dists(coords, idx)
    return float((mu + d_ik[0]) / (2.0 * mu + d_ij[0] + d_ik[0]))


def tste_cost_grad(t: TripletSet, y: Embedding | np.ndarray, alpha: float = 1.0) -> CostGrad:
    """Negative log-likelihood of the triplet set and its exact gradient.

    Cost is sum of -log p over triplets (empty set gives zero cost and
    gradient); each triplet contributes only to the rows of its three
    members, accumulated in fixed order via bincount so results do not
    depend on scheduling.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    coords = as_coords(y)
    n, d = coords.shape
    if len(t) == 0:
        return CostGrad(0.0, np.zeros((n, d)))
    t.check_bounds(n)
    idx = t.indices
    neg_log_p, base_j, base_k = _tste_neg_log_probs(coords, idx, alpha)
    p = np.exp(-neg_log_p)

    const = (1.0 + alpha) / alpha
    coef = (1.0 - p) * const
    diff_j = coords[idx[:, 0]] - coords[idx[:, 1]]
    diff_k = coords[idx[:, 0]] - coords[idx[:, 2]]
    push_j = (coef / base_j)[:, None] * diff_j
    push_k = (coef / base_k)[:, None] * diff_k

    grad = np.zeros((n, d))
    for c in range(d):
        grad[:, c] = (
            np.bincount(idx[:, 0], weights=push_j[:, c] - push_k[:, c], minlength=n)
            - np.bincount(idx[:, 1], weights=push_j[:, c], minlength=n)
            + np.bincount(idx[:, 2], weights=push_k[:, c], minlength=n)
        )
    return CostGrad(float(neg_log_p.sum()), grad)


def combined_cost_grad(
    p: AffinityMatrix,
    t: TripletSet,
    y: Embedding | np.ndarray,
    triplet_weight: float,
    alpha: float = 1.0,
    precomputed_q: tuple[np.ndarray, np.ndarray] | None = None,
) -> CostGrad:
    """Convex combination of the triplet and neighbor losses.

    At the endpoints the untouched sub-loss result is returned as-is, so a
    weight of exactly 0 or 1 is bit-identical to calling that loss alone.
    """
    if not 0.0 <= triplet_weight <= 1.0:
        raise ValueError(f"triplet_weight must be in [0, 1], got {triplet_weight}")
    if triplet_weight == 0.0:
        return tsne_cost_grad(p, y, precomputed_q)
    if triplet_weight == 1.0:
        return tste_cost_grad(t, y, alpha)
    sne = tsne_cost_grad(p, y, precomputed_q)
    ste = tste_cost_grad(t, y, alpha)
    w = triplet_weight
    return CostGrad(
        w * ste.cost + (1.0 - w) * sne.cost,
        w * ste.grad + (1.0 - w) * sne.grad,
    )
