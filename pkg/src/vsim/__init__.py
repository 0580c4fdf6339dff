"""vsim: word-embedding text similarity with a claim-matching workflow.

The pieces compose bottom-up: load a pretrained word2vec-format model,
average word vectors into unit-norm document vectors, store them in an
exact-scan cosine index, and run the confirm/dismiss suggestion service
on top.
"""

from . import errors
from .embeddings import (
    EmbeddingModel,
    ScoredWord,
    cosine,
    load_model,
    read_header,
    save_model,
)
from .index import (
    STATUS_FACT_CHECKED,
    STATUS_PENDING,
    DocumentRecord,
    IndexStats,
    SimilarityHit,
    VectorIndex,
    create_index,
)
from .service import ClaimMatchingService, ServiceConfig, Suggestion
from .vectorize import DocumentVector, TokenizerConfig, embed_text, tokenize

__version__ = "0.1.0"

__all__ = [
    "ClaimMatchingService",
    "DocumentRecord",
    "DocumentVector",
    "EmbeddingModel",
    "IndexStats",
    "STATUS_FACT_CHECKED",
    "STATUS_PENDING",
    "ScoredWord",
    "ServiceConfig",
    "SimilarityHit",
    "Suggestion",
    "TokenizerConfig",
    "VectorIndex",
    "cosine",
    "create_index",
    "embed_text",
    "errors",
    "load_model",
    "read_header",
    "save_model",
    "tokenize",
]
