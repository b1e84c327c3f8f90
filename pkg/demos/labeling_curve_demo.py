"""How far does partial labeling carry clustering accuracy?

Blobs are placed close enough to confuse a purely unsupervised embedding.
Revealing labels for a growing prefix of objects generates triplet
constraints among the revealed ones; the curve tracks embed-then-cluster
accuracy against the number of labels revealed. Writes curve.csv next to
this script.

Run from the repo root:  python3 demos/labeling_curve_demo.py
"""

from pathlib import Path

import numpy as np

from ktembed import (
    EmbedConfig,
    FeatureMatrix,
    LabelVector,
    euclidean_kernel,
    labeling_curve,
    save_curve,
)

rng = np.random.default_rng(6)
k, n_per, d = 8, 25, 6
centers = rng.normal(size=(k, d))
gaps = np.sqrt(((centers[:, None] - centers[None]) ** 2).sum(-1))
np.fill_diagonal(gaps, np.inf)
centers *= 3.2 / gaps.min()  # deliberately cramped: blobs overlap a little
pts = np.concatenate([c + rng.normal(size=(n_per, d)) for c in centers])
labels = np.repeat(np.arange(k), n_per)

# shuffle so a labeled prefix mixes classes, like annotating in random order
perm = rng.permutation(k * n_per)
feats = FeatureMatrix([f"p{i}" for i in range(k * n_per)], pts[perm])
truth = LabelVector(labels[perm])
kernel = euclidean_kernel(feats)

cfg = EmbedConfig(perplexity=20.0)
points = labeling_curve(kernel, truth, [0, 25, 50, 100, 200], cfg,
                        seed=0, n_seeds=3, cap=3000)
for pt in points:
    bar = "#" * int(40 * pt.mean_accuracy)
    print(f"n={pt.n:3d}  acc {pt.mean_accuracy:.3f} +/- {pt.sem:.3f}  {bar}")

out = Path(__file__).parent / "curve.csv"
save_curve(points, out)
print(f"wrote {out}")
