"""Turn raw text into a single unit-norm document vector.

The aggregate is the unweighted mean of the matched word vectors (which
are already unit norm), re-normalized. Matching is exact first, then a
lowercase fallback; anything still unmatched is skipped so partial
vocabulary coverage degrades gracefully instead of failing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingModel
from .errors import AllOutOfVocabulary, NoTokens, ZeroVector

_NORM_EPS = 1e-12


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase_fallback: bool = True
    min_token_chars: int = 1

    def __post_init__(self):
        if self.min_token_chars < 1:
            raise ValueError("min_token_chars must be >= 1")


DEFAULT_TOKENIZER = TokenizerConfig()


@dataclass(frozen=True)
class DocumentVector:
    """Unit-norm aggregate vector plus token-coverage counters."""

    values: np.ndarray
    tokens_total: int
    tokens_matched: int


def tokenize(text: str, config: TokenizerConfig = DEFAULT_TOKENIZER) -> list[str]:
    """Split on Unicode whitespace and strip edge punctuation.

    Leading and trailing characters that are neither letters nor digits are
    removed, so hyphens and apostrophes survive only word-internally.
    Original order and case are preserved.
    """
    tokens = []
    for raw in text.split():
        start, end = 0, len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        token = raw[start:end]
        if len(token) >= config.min_token_chars:
            tokens.append(token)
    return tokens


def embed_text(
    model: EmbeddingModel, text: str, config: TokenizerConfig = DEFAULT_TOKENIZER
) -> DocumentVector:
    """Mean-of-word-vectors document embedding.

    Deterministic for a fixed (model, text, config): tokens are summed in
    sequence order with a float64 accumulator.
    """
    tokens = tokenize(text, config)
    if not tokens:
        raise NoTokens("no tokens after tokenization")

    matched_rows = []
    for token in tokens:
        row = model.lookup(token)
        if row is None and config.lowercase_fallback:
            row = model.lookup(token.lower())
        if row is not None:
            matched_rows.append(row)
    if not matched_rows:
        raise AllOutOfVocabulary(f"none of {len(tokens)} tokens are in the vocabulary")

    if len(matched_rows) == 1:
        # already unit norm; returning the row itself keeps the
        # single-token case exactly equal to lookup()
        values = matched_rows[0].copy()
    else:
        acc = np.zeros(model.dim, dtype=np.float64)
        for row in matched_rows:
            acc += row
        acc /= len(matched_rows)
        norm = float(np.linalg.norm(acc))
        if norm < _NORM_EPS:
            raise ZeroVector("word vectors cancel out; mean has zero norm")
        values = (acc / norm).astype(np.float32)
    return DocumentVector(
        values=values, tokens_total=len(tokens), tokens_matched=len(matched_rows)
    )
