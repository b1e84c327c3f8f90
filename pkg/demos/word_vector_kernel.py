"""Distances between recipes from the words they contain.

Each recipe is a bag of ingredient tokens. Ingredient vectors live on the
unit sphere; two recipes are compared by optimally pairing their
ingredient vectors one-to-one and summing the matched dot products. The
negated similarities, shifted to be a valid distance table, feed the
embedding like any other kernel.

Run from the repo root:  python3 demos/word_vector_kernel.py
"""

import numpy as np

from ktembed import (
    EmbedConfig,
    TokenEmbeddingTable,
    TokenListCollection,
    TripletSet,
    assignment_kernel,
    embed,
)

rng = np.random.default_rng(4)

# toy ingredient space: three flavor families plus noise dimensions
families = {
    "sweet": ["sugar", "honey", "caramel", "vanilla"],
    "salty": ["salt", "soy sauce", "anchovy", "miso"],
    "sour": ["lemon", "vinegar", "tamarind", "yogurt"],
}
vectors = {}
for axis, (family, tokens) in enumerate(families.items()):
    base = np.zeros(5)
    base[axis] = 1.0
    for t in tokens:
        v = base + 0.15 * rng.normal(size=5)
        vectors[t] = v / np.linalg.norm(v)
table = TokenEmbeddingTable(vectors)

recipes = {
    "toffee": ["sugar", "caramel", "vanilla"],
    "baklava": ["honey", "sugar", "lemon"],
    "ramen": ["soy sauce", "miso", "salt"],
    "caesar": ["anchovy", "salt", "lemon"],
    "ceviche": ["lemon", "vinegar", "salt"],
    "lassi": ["yogurt", "honey"],
    "ponzu": ["soy sauce", "lemon", "vinegar"],
    "fudge": ["sugar", "vanilla", "caramel", "honey"],
}
lists = TokenListCollection(list(recipes), list(recipes.values()))

kernel, shift = assignment_kernel(lists, table)
print(f"kernel over {kernel.n} recipes, similarity shift {shift:.3f}")

y, _ = embed(kernel, TripletSet.empty(),
             EmbedConfig(triplet_weight=0.0, perplexity=3.0, seed=1))

# nearest neighbor of each recipe in the 2-D layout
d = np.sqrt(((y.coords[:, None] - y.coords[None]) ** 2).sum(-1))
np.fill_diagonal(d, np.inf)
for i, name in enumerate(y.ids):
    print(f"{name:10s} -> {y.ids[int(d[i].argmin())]}")
