"""Debiasing engine for vector embeddings.

Identifies concept subspaces from seed words, applies geometric
bias-mitigation transforms, scores residual bias with WEAT and ECT, and
decomposes every transform into a sequence of 2D view frames consumable by
the CLI, the HTTP session service, and the browser UI.
"""

from .store import (
    EmbeddingError,
    EmbeddingFormatError,
    EmbeddingSnapshot,
    PairedWordSet,
    UnknownTokenError,
    WordSet,
    cosine,
    export_embedding,
    get_vectors,
    load_embedding,
    nearest_neighbors,
)
from .subspace import (
    ConceptDirection,
    IterativeConfig,
    SubspaceError,
    golden_section_search,
    identify_classifier_normal,
    identify_iterative,
    identify_paired_pca,
    identify_pca,
    identify_two_means,
)
from .metrics import MetricReport, WeatSets, ect, metric_report, weat
from .transforms import (
    DebiasJob,
    JobValidationError,
    MetricConfig,
    TransformError,
    TransformResult,
    hard_debias,
    inlp,
    linear_projection,
    oscar,
    run_job,
)
from .views import StepTrace, ViewFrame, build_trace, camera_aligned, camera_pca, trace_to_dict

__version__ = "0.1.0"

__all__ = [
    "ConceptDirection",
    "DebiasJob",
    "EmbeddingError",
    "EmbeddingFormatError",
    "EmbeddingSnapshot",
    "IterativeConfig",
    "JobValidationError",
    "MetricConfig",
    "MetricReport",
    "PairedWordSet",
    "StepTrace",
    "SubspaceError",
    "TransformError",
    "TransformResult",
    "UnknownTokenError",
    "ViewFrame",
    "WeatSets",
    "WordSet",
    "build_trace",
    "camera_aligned",
    "camera_pca",
    "cosine",
    "ect",
    "export_embedding",
    "get_vectors",
    "golden_section_search",
    "hard_debias",
    "identify_classifier_normal",
    "identify_iterative",
    "identify_paired_pca",
    "identify_pca",
    "identify_two_means",
    "inlp",
    "linear_projection",
    "load_embedding",
    "metric_report",
    "nearest_neighbors",
    "oscar",
    "run_job",
    "trace_to_dict",
    "weat",
]
