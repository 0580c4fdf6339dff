"""Latency of the exact scan at a realistic shape (pretrained-model dims).

The production-scale run is `vsim bench --docs 100000 --dim 300`; this demo
keeps the document count small enough to finish in a few seconds.
"""
import time

import numpy as np

from vsim import DocumentRecord, create_index

n, dim = 20_000, 300
rng = np.random.default_rng(42)

print(f"indexing {n} random unit vectors (dim {dim})...")
index = create_index(dim)
block = rng.standard_normal((n, dim)).astype(np.float32)
block /= np.linalg.norm(block, axis=1, keepdims=True)
t0 = time.perf_counter()
for i in range(n):
    index.upsert(DocumentRecord(id=f"doc{i:06d}", vector=block[i], text=""))
print(f"built in {time.perf_counter() - t0:.2f}s")

queries = rng.standard_normal((200, dim))
queries /= np.linalg.norm(queries, axis=1, keepdims=True)

latencies = []
for q in queries:
    t0 = time.perf_counter()
    index.search(q, k=10)
    latencies.append(time.perf_counter() - t0)

ms = np.array(latencies) * 1000
print(f"\nexact-scan latency over {len(queries)} queries ({n} docs, dim {dim}):")
print(f"  p50: {np.percentile(ms, 50):.3f} ms")
print(f"  p95: {np.percentile(ms, 95):.3f} ms")
print(f"  p99: {np.percentile(ms, 99):.3f} ms")
print(f"  throughput: {len(queries) / (ms.sum() / 1000):.0f} queries/s")
