import struct

import numpy as np
import pytest

from vsim.embeddings import EmbeddingModel

# Four words arranged so that madrid - spain + france lands near paris,
# mirroring the classic word2vec analogy example.
TOY4_WORDS = ["spain", "france", "madrid", "paris"]
TOY4_VECTORS = [
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.70711, 0.0, 0.70711],
    [0.0, 0.70711, 0.70711],
]


def encode_binary_model(words, vectors) -> bytes:
    """Hand-rolled binary writer, independent of vsim.embeddings.save_model."""
    dim = len(vectors[0])
    out = f"{len(words)} {dim}\n".encode("ascii")
    for word, vec in zip(words, vectors):
        out += word.encode("utf-8") + b" "
        out += struct.pack(f"<{dim}f", *[float(x) for x in vec])
        out += b"\n"
    return out


def encode_text_model(words, vectors) -> bytes:
    dim = len(vectors[0])
    out = f"{len(words)} {dim}\n".encode("ascii")
    for word, vec in zip(words, vectors):
        floats = " ".join(repr(float(x)) for x in vec)
        out += f"{word} {floats}\n".encode("utf-8")
    return out


@pytest.fixture(scope="session")
def toy4_model() -> EmbeddingModel:
    return EmbeddingModel(TOY4_WORDS, np.array(TOY4_VECTORS, dtype=np.float32))


@pytest.fixture()
def toy4_path(tmp_path):
    path = tmp_path / "toy4.bin"
    path.write_bytes(encode_binary_model(TOY4_WORDS, TOY4_VECTORS))
    return path


def random_unit(rng, dim, n=None) -> np.ndarray:
    shape = (dim,) if n is None else (n, dim)
    x = rng.standard_normal(shape)
    norms = np.linalg.norm(x, axis=-1, keepdims=True)
    return x / norms
