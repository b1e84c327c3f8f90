"""Gradient-descent driver producing the final embedding.

Plain momentum descent on the combined cost: Gaussian(0, 1e-4) init, the
affinity matrix multiplied by an exaggeration factor for the first phase
(the triplet term is never exaggerated), and the momentum coefficient
switching from its early to its late value at the same boundary. No gain
adaptation, no adaptive learning rate; every run is a deterministic function
of its inputs and seed, including across BLAS thread counts.

The per-iteration trace reports the neighbor cost against the UNexaggerated
affinities at every iteration so the curve is comparable across the
exaggeration boundary. A zero-weight term is skipped entirely and traced as
0.0, which makes the weight-0 run independent of the triplet set and the
weight-1 run independent of the kernel values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .affinity import AffinityMatrix, affinity_matrix
from .io import fmt
from .loss import kl_cost, student_t_q, tste_cost_grad, tsne_cost_grad
from .types import DistanceKernel, Embedding, EmbedConfig, TripletSet, _readonly

INIT_STDDEV = 1e-4


@dataclass(frozen=True)
class OptimizerTrace:
    """Per-iteration convergence diagnostics, one row per iteration."""

    iteration: np.ndarray
    total_cost: np.ndarray
    tsne_cost: np.ndarray
    tste_cost: np.ndarray
    grad_norm: np.ndarray

    def __post_init__(self):
        n = self.iteration.shape[0]
        for name in ("iteration", "total_cost", "tsne_cost", "tste_cost", "grad_norm"):
            a = np.asarray(getattr(self, name), dtype=float if name != "iteration" else np.int64)
            if a.shape != (n,):
                raise ValueError("trace columns must share one length")
            if not np.all(np.isfinite(a)):
                raise ValueError(f"non-finite value in trace column {name}")
            object.__setattr__(self, name, _readonly(a))

    def __len__(self) -> int:
        return self.iteration.shape[0]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("iter,total_cost,tsne_cost,tste_cost,grad_norm\n")
            for row in zip(self.iteration, self.total_cost, self.tsne_cost,
                           self.tste_cost, self.grad_norm):
                fh.write(",".join([str(int(row[0]))] + [fmt(v) for v in row[1:]]) + "\n")


def auto_lambda(
    p: AffinityMatrix,
    t: TripletSet,
    y0: Embedding | np.ndarray,
    alpha: float = 1.0,
) -> float:
    """Mixing weight that balances the two gradient norms at y0.

    Returns ||g_sne|| / (||g_sne|| + ||g_ste||), which makes the weighted
    triplet gradient and the weighted neighbor gradient equally long. An
    empty triplet set yields 0; two vanishing gradients yield 0.5.
    """
    if len(t) == 0:
        return 0.0
    norm_sne = float(np.linalg.norm(tsne_cost_grad(p, y0).grad))
    norm_ste = float(np.linalg.norm(tste_cost_grad(t, y0, alpha).grad))
    if norm_sne == 0.0 and norm_ste == 0.0:
        return 0.5
    return norm_sne / (norm_sne + norm_ste)


def initial_coords(n: int, d: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).normal(0.0, INIT_STDDEV, size=(n, d))


def embed(
    k: DistanceKernel,
    t: TripletSet,
    cfg: EmbedConfig,
    y0: np.ndarray | None = None,
    p: AffinityMatrix | None = None,
) -> tuple[Embedding, OptimizerTrace]:
    """Run the full optimization and return the embedding plus its trace.

    `y0` warm-starts from given coordinates instead of the seeded Gaussian
    draw; `p` injects precomputed affinities (they must match cfg.perplexity,
    which the caller owns). A weight above 0 with no triplets is rejected;
    with triplets and weight AUTO the balance rule picks the weight at y0.
    """
    n = k.n
    t.check_bounds(n)
    if not cfg.perplexity < n:
        raise ValueError(f"perplexity {cfg.perplexity} requires more than {n} objects")
    if cfg.triplet_weight is not None and cfg.triplet_weight > 0 and len(t) == 0:
        raise ValueError("triplet_weight > 0 requires a non-empty triplet set")

    if p is None:
        p = affinity_matrix(k, cfg.perplexity)
    if y0 is None:
        coords = initial_coords(n, cfg.d, cfg.seed)
    else:
        coords = np.array(y0, dtype=float)
        if coords.shape != (n, cfg.d):
            raise ValueError(f"warm-start shape {coords.shape}, expected {(n, cfg.d)}")

    if len(t) == 0:
        weight = 0.0
    elif cfg.triplet_weight is None:
        weight = auto_lambda(p, t, coords, cfg.alpha)
    else:
        weight = cfg.triplet_weight

    p_plain = p.p
    p_exagg = p_plain * cfg.exaggeration_factor
    velocity = np.zeros_like(coords)
    trace = np.zeros((cfg.total_iters, 5))

    for it in range(cfg.total_iters):
        early = it < cfg.exaggeration_iters
        momentum = cfg.momentum_early if early else cfg.momentum_late

        sne_grad = None
        tsne_c = 0.0
        if weight < 1.0:
            q, unnorm = student_t_q(coords)
            w = ((p_exagg if early else p_plain) - q) * unnorm
            sne_grad = 4.0 * (
                w.sum(axis=1)[:, None] * coords - np.einsum("ij,jd->id", w, coords)
            )
            tsne_c = kl_cost(p_plain, q)

        ste_grad = None
        tste_c = 0.0
        if weight > 0.0:
            ste = tste_cost_grad(t, coords, cfg.alpha)
            ste_grad, tste_c = ste.grad, ste.cost

        if weight == 0.0:
            grad = sne_grad
        elif weight == 1.0:
            grad = ste_grad
        else:
            grad = weight * ste_grad + (1.0 - weight) * sne_grad

        total_c = weight * tste_c + (1.0 - weight) * tsne_c
        grad_norm = float(np.linalg.norm(grad))
        if not np.isfinite(total_c) or not np.isfinite(grad_norm):
            raise FloatingPointError(
                f"non-finite cost or gradient at iteration {it} "
                f"(total={total_c}, grad_norm={grad_norm})"
            )
        trace[it] = (it, total_c, tsne_c, tste_c, grad_norm)

        velocity = momentum * velocity - cfg.learning_rate * grad
        coords = coords + velocity

    result = Embedding(k.ids, coords)
    return result, OptimizerTrace(
        iteration=trace[:, 0].astype(np.int64),
        total_cost=trace[:, 1],
        tsne_cost=trace[:, 2],
        tste_cost=trace[:, 3],
        grad_norm=trace[:, 4],
    )
