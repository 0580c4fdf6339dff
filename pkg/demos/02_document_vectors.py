"""From raw text to one unit-norm vector per document.

Tokenization strips edge punctuation but keeps word-internal hyphens and
apostrophes; unknown tokens fall back to lowercase, then get skipped, so
partially covered texts still vectorize.
"""
import numpy as np

from vsim import EmbeddingModel, cosine, embed_text, tokenize

print("== tokenization ==")
for text in ["Hello, world!", "state-of-the-art 'quote'", "Vote! (Again.)"]:
    print(f"  {text!r} -> {tokenize(text)}")

rng = np.random.default_rng(0)
words = ["election", "vote", "fraud", "ballot", "cat", "dog"]
vectors = np.array(
    [
        [0.9, 0.1, 0.1],
        [0.85, 0.2, 0.1],
        [0.8, 0.15, 0.2],
        [0.88, 0.12, 0.15],
        [0.1, 0.9, 0.2],
        [0.15, 0.85, 0.25],
    ],
    dtype=np.float32,
)
model = EmbeddingModel(words, vectors)

print("\n== document vectors are mean-of-words, re-normalized ==")
doc = embed_text(model, "Election FRAUD at the ballot!")
print(f"matched {doc.tokens_matched}/{doc.tokens_total} tokens")
print("vector:", np.round(doc.values, 4), "norm:", round(float(np.linalg.norm(doc.values)), 6))

print("\n== near-duplicates score close to 1, unrelated text does not ==")
a = embed_text(model, "election fraud ballot")
b = embed_text(model, "ballot fraud election")   # same words, any order
c = embed_text(model, "cat dog")
print("cos(a, b) =", round(cosine(a.values, b.values), 6))
print("cos(a, c) =", round(cosine(a.values, c.values), 6))

print("\n== out-of-vocabulary tokens are skipped ==")
partial = embed_text(model, "election xyzzy")
print(f"matched {partial.tokens_matched}/{partial.tokens_total}; "
      "a fully unmatched text raises AllOutOfVocabulary")
