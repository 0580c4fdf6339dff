import numpy as np
import pytest

from vsim.embeddings import EmbeddingModel, cosine
from vsim.errors import AllOutOfVocabulary, NoTokens, ZeroVector
from vsim.vectorize import TokenizerConfig, embed_text, tokenize

from conftest import random_unit


# --- tokenize ---------------------------------------------------------------

def test_tokenize_strips_edge_punctuation():
    assert tokenize("Hello, world!") == ["Hello", "world"]


def test_tokenize_empty_text():
    assert tokenize("") == []


def test_tokenize_keeps_internal_connectors():
    assert tokenize("state-of-the-art 'quote'") == ["state-of-the-art", "quote"]


def test_tokenize_preserves_order_and_case():
    assert tokenize("B a C") == ["B", "a", "C"]


def test_tokenize_min_token_chars():
    config = TokenizerConfig(min_token_chars=3)
    assert tokenize("an ant hill", config) == ["ant", "hill"]


def test_tokenize_drops_symbol_only_tokens():
    assert tokenize("👍👍 ... --") == []


def test_tokenize_unicode_whitespace():
    assert tokenize("a b\tc\nd") == ["a", "b", "c", "d"]


def test_tokenizer_config_validates():
    with pytest.raises(ValueError):
        TokenizerConfig(min_token_chars=0)


# --- embed_text --------------------------------------------------------------

def test_embed_two_known_words(toy4_model):
    doc = embed_text(toy4_model, "spain france")
    np.testing.assert_allclose(doc.values, [0.70711, 0.70711, 0.0], atol=1e-5)
    assert doc.tokens_total == 2
    assert doc.tokens_matched == 2
    assert abs(np.linalg.norm(doc.values.astype(np.float64)) - 1.0) <= 1e-6


def test_embed_all_oov(toy4_model):
    with pytest.raises(AllOutOfVocabulary):
        embed_text(toy4_model, "xyzzy plugh")


def test_embed_partial_coverage_single_match(toy4_model):
    doc = embed_text(toy4_model, "spain xyzzy")
    np.testing.assert_array_equal(doc.values, toy4_model.lookup("spain"))
    assert doc.tokens_total == 2
    assert doc.tokens_matched == 1


def test_embed_empty_text(toy4_model):
    with pytest.raises(NoTokens):
        embed_text(toy4_model, "   ")


def test_lowercase_fallback(toy4_model):
    doc = embed_text(toy4_model, "SPAIN")
    np.testing.assert_array_equal(doc.values, toy4_model.lookup("spain"))


def test_lowercase_fallback_disabled(toy4_model):
    config = TokenizerConfig(lowercase_fallback=False)
    with pytest.raises(AllOutOfVocabulary):
        embed_text(toy4_model, "SPAIN", config)


def test_exactly_opposing_vectors(toy4_model):
    model = EmbeddingModel(["up", "down"], np.array([[1, 0], [-1, 0]], dtype=np.float32))
    with pytest.raises(ZeroVector):
        embed_text(model, "up down")


def test_embed_is_deterministic(toy4_model):
    a = embed_text(toy4_model, "spain france madrid")
    b = embed_text(toy4_model, "spain france madrid")
    assert a.values.tobytes() == b.values.tobytes()
    assert (a.tokens_total, a.tokens_matched) == (b.tokens_total, b.tokens_matched)


def test_single_token_equals_lookup_exactly(toy4_model):
    doc = embed_text(toy4_model, "madrid")
    assert doc.values.tobytes() == toy4_model.lookup("madrid").tobytes()


def test_token_permutation_changes_little():
    rng = np.random.default_rng(42)
    words = [f"w{i:02d}" for i in range(64)]
    model = EmbeddingModel(words, random_unit(rng, 12, 64).astype(np.float32))
    text = " ".join(words)
    shuffled = list(words)
    rng.shuffle(shuffled)
    a = embed_text(model, text)
    b = embed_text(model, " ".join(shuffled))
    np.testing.assert_allclose(a.values, b.values, atol=1e-6)


def test_self_cosine_is_one(toy4_model):
    doc = embed_text(toy4_model, "madrid paris spain")
    assert cosine(doc.values, doc.values) == pytest.approx(1.0, abs=1e-9)
