"""Word-embedding basics: load a model, look words up, run analogies.

Builds a tiny four-word model where the classic capital-city offset holds,
saves it in the standard binary interchange format, and loads it back the
way a pretrained model (e.g. the 3M x 300 Google News vectors) would be.
"""
import tempfile
from pathlib import Path

import numpy as np

from vsim import EmbeddingModel, cosine, load_model, save_model

words = ["spain", "france", "madrid", "paris"]
vectors = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.70711, 0.0, 0.70711],
        [0.0, 0.70711, 0.70711],
    ],
    dtype=np.float32,
)

print("== build and persist a model ==")
model = EmbeddingModel(words, vectors)
path = Path(tempfile.mkdtemp()) / "toy4.bin"
save_model(model, path, format="binary")
print(f"saved {model.vocab_size} words x {model.dim} dims to {path}")

model = load_model(path)  # format sniffed automatically
print(f"reloaded: vocab={model.vocab_size} dim={model.dim}")
print("rows are unit norm:", np.linalg.norm(model.vectors, axis=1))

print("\n== lookups are exact-match ==")
print("spain ->", model.lookup("spain"))
print("Spain ->", model.lookup("Spain"), "(case folding happens in the vectorizer)")

print("\n== cosine similarity ==")
print("cos(spain, madrid) =", round(cosine(model.lookup("spain"), model.lookup("madrid")), 4))
print("cos(spain, france) =", round(cosine(model.lookup("spain"), model.lookup("france")), 4))

print("\n== nearest words ==")
for hit in model.nearest_words(model.lookup("spain"), k=3, exclude={"spain"}):
    print(f"  {hit.word}\t{hit.score:.4f}")

print("\n== analogy: spain is to madrid as france is to ... ==")
for hit in model.analogy("spain", "madrid", "france", k=1):
    print(f"  {hit.word}\t{hit.score:.4f}")
