"""Pretrained word-embedding models and vector-space queries.

Loads the two de-facto interchange formats for word2vec-style vectors
(binary and text), keeps every row L2-normalized so cosine between rows is
a plain dot product, and answers nearest-word and word-analogy queries
over the vocabulary.

Format, byte for byte:

binary
    ASCII header ``<vocab_size> <dim>\\n``, then per word: the UTF-8 word
    bytes, one 0x20 space, ``dim`` little-endian float32 values, and an
    optional single 0x0A which is consumed when present.
text
    The same header, then one ``<word> <f1> ... <fdim>`` line per word.
"""

from __future__ import annotations

import codecs
import io
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateWord,
    MalformedHeader,
    ModelFormatError,
    TruncatedFile,
    UnknownWord,
    ZeroVector,
)

# Longest token accepted while scanning a binary file for the 0x20 word
# terminator; guards against walking megabytes of a corrupt file.
MAX_TOKEN_BYTES = 1000

# Bytes of body sniffed by format="auto" to tell text from binary.
_SNIFF_BYTES = 8192

# Rows in each float64 accumulation block of a vocabulary scan.
_SCAN_CHUNK = 65536

_NORM_EPS = 1e-12


@dataclass(frozen=True)
class ScoredWord:
    word: str
    score: float


class EmbeddingModel:
    """Immutable vocabulary -> unit-vector table.

    Safe to share between any number of threads: nothing mutates after
    construction.
    """

    def __init__(self, words: list[str], vectors: np.ndarray):
        vectors = np.array(vectors, dtype=np.float32, order="C")
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise ValueError("vectors must be one row per word")
        for start in range(0, vectors.shape[0], _SCAN_CHUNK):
            stop = min(start + _SCAN_CHUNK, vectors.shape[0])
            block = vectors[start:stop].astype(np.float64)
            norms = np.linalg.norm(block, axis=1)
            if np.any(norms < _NORM_EPS):
                bad = start + int(np.argmax(norms < _NORM_EPS))
                raise ZeroVector(f"zero vector for word {words[bad]!r}")
            vectors[start:stop] = (block / norms[:, None]).astype(np.float32)
        self.words: tuple[str, ...] = tuple(words)
        self.vectors = vectors
        self.vectors.setflags(write=False)
        self.word_index: dict[str, int] = {w: i for i, w in enumerate(self.words)}
        if len(self.word_index) != len(self.words):
            raise DuplicateWord("duplicate word in vocabulary")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def vocab_size(self) -> int:
        return self.vectors.shape[0]

    def lookup(self, token: str) -> np.ndarray | None:
        """Return the unit row for an exact token match, or None.

        Case folding deliberately does not live here; see
        :mod:`vsim.vectorize` for the lowercase fallback policy.
        """
        i = self.word_index.get(token)
        if i is None:
            return None
        return self.vectors[i]

    def nearest_words(
        self, query, k: int, exclude: set[str] | frozenset[str] = frozenset()
    ) -> list[ScoredWord]:
        """The k vocabulary words most cosine-similar to ``query``.

        Sorted by score descending; ties broken by ascending vocabulary
        row index so results are identical across runs and platforms.
        """
        if k <= 0:
            return []
        q = np.asarray(query, dtype=np.float64).reshape(-1)
        if q.shape[0] != self.dim:
            raise DimensionMismatch(
                f"query has {q.shape[0]} components, model dim is {self.dim}"
            )
        qn = math.sqrt(float(np.dot(q, q)))
        if qn < _NORM_EPS:
            raise ZeroVector("query vector has zero norm")
        q /= qn
        scores = _matvec_f64(self.vectors, q)
        # stable sort on -score leaves equal scores in row order
        order = np.argsort(-scores, kind="stable")
        out: list[ScoredWord] = []
        for i in order:
            word = self.words[i]
            if word in exclude:
                continue
            out.append(ScoredWord(word, _clamp(float(scores[i]))))
            if len(out) == k:
                break
        return out

    def analogy(self, a: str, b: str, c: str, k: int) -> list[ScoredWord]:
        """Rank candidates for the analogy a:b :: c:? (additive offset).

        Builds the target vec(b) - vec(a) + vec(c) from normalized rows
        and returns its nearest vocabulary words, never echoing a, b or c.
        """
        for token in (a, b, c):
            if token not in self.word_index:
                raise UnknownWord(token)
        target = (
            self.lookup(b).astype(np.float64)
            - self.lookup(a).astype(np.float64)
            + self.lookup(c).astype(np.float64)
        )
        if np.linalg.norm(target) < _NORM_EPS:
            raise ZeroVector("analogy target vector degenerates to zero")
        return self.nearest_words(target, k, exclude={a, b, c})


def cosine(u, v) -> float:
    """dot(u, v) / (|u| * |v|), accumulated in float64, clamped to [-1, 1]."""
    ua = np.asarray(u, dtype=np.float64).reshape(-1)
    va = np.asarray(v, dtype=np.float64).reshape(-1)
    if ua.shape[0] != va.shape[0]:
        raise DimensionMismatch(f"lengths differ: {ua.shape[0]} vs {va.shape[0]}")
    nu = math.sqrt(float(np.dot(ua, ua)))
    nv = math.sqrt(float(np.dot(va, va)))
    if nu < _NORM_EPS or nv < _NORM_EPS:
        raise ZeroVector("cosine is undefined for zero-norm vectors")
    return _clamp(float(np.dot(ua, va)) / (nu * nv))


def read_header(path: str | os.PathLike) -> tuple[int, int]:
    """Parse just the (vocab_size, dim) header line of a model file."""
    with open(path, "rb") as f:
        return _parse_header(_read_header_line(f))


def load_model(path: str | os.PathLike, format: str = "auto") -> EmbeddingModel:
    """Load a model file in binary, text, or sniffed format.

    The returned model owns normalized copies of the file's vectors; the
    file itself is never modified.
    """
    if format not in ("binary", "text", "auto"):
        raise ValueError(f"format must be binary, text or auto, got {format!r}")
    with open(path, "rb") as f:
        header = _read_header_line(f)
        vocab_size, dim = _parse_header(header)
        if format == "auto":
            format = "binary" if _body_is_binary(f) else "text"
        if format == "binary":
            words, vectors = _read_binary_body(f, vocab_size, dim)
        else:
            words, vectors = _read_text_body(f, vocab_size, dim)
    return EmbeddingModel(words, vectors)


def save_model(model: EmbeddingModel, path: str | os.PathLike, format: str = "binary") -> None:
    """Write the model's (normalized) vectors back out in either format."""
    if format not in ("binary", "text"):
        raise ValueError(f"format must be binary or text, got {format!r}")
    with open(path, "wb") as f:
        f.write(f"{model.vocab_size} {model.dim}\n".encode("ascii"))
        for i, word in enumerate(model.words):
            row = model.vectors[i]
            if format == "binary":
                f.write(word.encode("utf-8") + b" ")
                f.write(row.astype("<f4").tobytes())
                f.write(b"\n")
            else:
                floats = " ".join(str(x) for x in row)
                f.write(f"{word} {floats}\n".encode("utf-8"))


# --- internals --------------------------------------------------------------


def _clamp(x: float) -> float:
    return max(-1.0, min(1.0, x))


def _matvec_f64(matrix: np.ndarray, q: np.ndarray) -> np.ndarray:
    """matrix @ q with a float64 accumulator, blocked to bound temp memory."""
    n = matrix.shape[0]
    out = np.empty(n, dtype=np.float64)
    for start in range(0, n, _SCAN_CHUNK):
        stop = min(start + _SCAN_CHUNK, n)
        out[start:stop] = matrix[start:stop].astype(np.float64) @ q
    return out


def _read_header_line(f: io.BufferedReader) -> bytes:
    line = f.readline(128)
    if not line.endswith(b"\n"):
        raise MalformedHeader("missing or overlong header line")
    return line


def _parse_header(line: bytes) -> tuple[int, int]:
    parts = line.rstrip(b"\r\n").split(b" ")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise MalformedHeader(f"expected '<vocab_size> <dim>', got {line!r}")
    vocab_size, dim = int(parts[0]), int(parts[1])
    if vocab_size < 1 or dim < 1:
        raise MalformedHeader("vocab_size and dim must be positive")
    return vocab_size, dim


def _body_is_binary(f: io.BufferedReader) -> bool:
    """Sniff: a body that is not valid UTF-8 text is the binary format."""
    pos = f.tell()
    chunk = f.read(_SNIFF_BYTES)
    f.seek(pos)
    decoder = codecs.getincrementaldecoder("utf-8")()
    try:
        # final=False tolerates a multi-byte character cut at the chunk edge
        decoder.decode(chunk, final=False)
    except UnicodeDecodeError:
        return True
    return False


def _read_binary_body(
    f: io.BufferedReader, vocab_size: int, dim: int
) -> tuple[list[str], np.ndarray]:
    words: list[str] = []
    seen: set[str] = set()
    vectors = np.empty((vocab_size, dim), dtype=np.float32)
    row_bytes = dim * 4
    for i in range(vocab_size):
        token = _read_token(f)
        if token in seen:
            raise DuplicateWord(f"duplicate word {token!r}")
        seen.add(token)
        raw = f.read(row_bytes)
        if len(raw) != row_bytes:
            raise TruncatedFile(
                f"vector for word {i} ends after {len(raw)} of {row_bytes} bytes"
            )
        vectors[i] = np.frombuffer(raw, dtype="<f4", count=dim)
        words.append(token)
        nxt = f.peek(1)[:1] if hasattr(f, "peek") else b""
        if nxt == b"\n":
            f.read(1)
    return words, vectors


def _read_token(f: io.BufferedReader) -> str:
    buf = bytearray()
    while True:
        ch = f.read(1)
        if not ch:
            raise TruncatedFile("file ends inside a word token")
        if ch == b" ":
            break
        buf += ch
        if len(buf) > MAX_TOKEN_BYTES:
            raise ModelFormatError(
                f"token exceeds {MAX_TOKEN_BYTES} bytes; file is likely corrupt"
            )
    try:
        return buf.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ModelFormatError(f"word is not valid UTF-8: {buf[:32]!r}...") from e


def _read_text_body(
    f: io.BufferedReader, vocab_size: int, dim: int
) -> tuple[list[str], np.ndarray]:
    words: list[str] = []
    seen: set[str] = set()
    vectors = np.empty((vocab_size, dim), dtype=np.float32)
    for i in range(vocab_size):
        line = f.readline()
        if not line:
            raise TruncatedFile(f"file ends after {i} of {vocab_size} rows")
        parts = line.rstrip(b"\r\n").split(b" ")
        if len(parts) != dim + 1:
            raise DimensionMismatch(
                f"row {i} has {len(parts) - 1} values, expected {dim}"
            )
        try:
            token = parts[0].decode("utf-8")
        except UnicodeDecodeError as e:
            raise ModelFormatError(f"word is not valid UTF-8: {parts[0][:32]!r}") from e
        if token in seen:
            raise DuplicateWord(f"duplicate word {token!r}")
        seen.add(token)
        try:
            vectors[i] = [float(p) for p in parts[1:]]
        except ValueError as e:
            raise ModelFormatError(f"row {i} has a non-numeric value") from e
        words.append(token)
    return words, vectors
