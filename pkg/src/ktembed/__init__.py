"""Embedding objects from a machine-derived distance kernel plus human
relative-similarity judgments.

The neighborhood term matches a Student-t map to Gaussian affinities
computed from the kernel; the triplet term is a heavy-tailed ranking
likelihood over (i, j, k) comparisons; a single weight blends the two, with
an automatic setting that balances the initial gradient norms.
"""

from .affinity import (
    AffinityMatrix,
    SigmaVector,
    affinity_matrix,
    calibrate_sigma,
    calibrate_sigmas,
    conditional_p,
    joint_p,
)
from .evaluate import (
    ClusterAssignment,
    CurvePoint,
    kmeans,
    labeling_curve,
    majority_label_accuracy,
    save_curve,
)
from .io import (
    load_embedding,
    load_features,
    load_kernel,
    load_labeled_ids,
    load_labels,
    load_triplets,
    save_embedding,
    save_features,
    save_kernel,
    save_triplets,
)
from .kernels import (
    TokenEmbeddingTable,
    TokenListCollection,
    assignment_kernel,
    assignment_similarity,
    euclidean_kernel,
    load_token_lists,
    load_token_vectors,
)
from .loss import (
    CostGrad,
    ckl_prob,
    combined_cost_grad,
    kl_cost,
    student_t_q,
    tsne_cost_grad,
    tste_cost_grad,
    tste_prob,
)
from .optimize import OptimizerTrace, auto_lambda, embed, initial_coords
from .triplets import (
    count_label_triplets,
    expand_selection,
    sample_from_labels,
    split,
    violation_fraction,
)
from .types import (
    AUTO,
    UNREVEALED,
    DistanceKernel,
    Embedding,
    EmbedConfig,
    FeatureMatrix,
    LabelVector,
    ParseError,
    Triplet,
    TripletSet,
)

__all__ = [
    "AUTO",
    "UNREVEALED",
    "AffinityMatrix",
    "ClusterAssignment",
    "CostGrad",
    "CurvePoint",
    "DistanceKernel",
    "EmbedConfig",
    "Embedding",
    "FeatureMatrix",
    "LabelVector",
    "OptimizerTrace",
    "ParseError",
    "SigmaVector",
    "TokenEmbeddingTable",
    "TokenListCollection",
    "Triplet",
    "TripletSet",
    "affinity_matrix",
    "assignment_kernel",
    "assignment_similarity",
    "auto_lambda",
    "calibrate_sigma",
    "calibrate_sigmas",
    "ckl_prob",
    "combined_cost_grad",
    "conditional_p",
    "count_label_triplets",
    "embed",
    "euclidean_kernel",
    "expand_selection",
    "initial_coords",
    "joint_p",
    "kl_cost",
    "kmeans",
    "labeling_curve",
    "load_embedding",
    "load_features",
    "load_kernel",
    "load_labeled_ids",
    "load_labels",
    "load_token_lists",
    "load_token_vectors",
    "load_triplets",
    "majority_label_accuracy",
    "sample_from_labels",
    "save_curve",
    "save_embedding",
    "save_features",
    "save_kernel",
    "save_triplets",
    "split",
    "student_t_q",
    "tsne_cost_grad",
    "tste_cost_grad",
    "tste_prob",
    "violation_fraction",
]
