"""The full workflow: ingest, suggest, decide, restart.

New pending items are compared against everything already fact-checked;
matches above the threshold become suggestions for a human to confirm or
dismiss. The journal plus snapshot reproduce the state after a restart,
which is what keeps the same claim from being fact-checked twice.

The same operations are exposed over HTTP by `vsim serve`; see README.md.
"""
import tempfile
from pathlib import Path

from vsim import ClaimMatchingService, ServiceConfig, save_model, EmbeddingModel
import numpy as np

workdir = Path(tempfile.mkdtemp())
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
save_model(EmbeddingModel(words, vectors), workdir / "model.bin")

config = ServiceConfig(
    model_path=str(workdir / "model.bin"),
    index_path=str(workdir / "index.vsix"),
    journal_path=str(workdir / "journal.ndjson"),
    suggestion_threshold=0.75,
    suggestion_k=5,
)
service = ClaimMatchingService(config)

print("== journalists fact-check two claims ==")
service.submit_text("fc-1", "election fraud at the ballot", status="fact_checked")
service.submit_text("fc-2", "vote counting fraud", status="fact_checked")

print("\n== a near-duplicate arrives as pending content ==")
item, suggestions = service.submit_text("new-1", "Election fraud at the ballot!")
for s in suggestions:
    print(f"  suggestion {s.suggestion_id}: {s.source_id} -> {s.target_id} "
          f"(score {s.score:.4f}, state {s.state})")

print("\n== a human confirms the match ==")
decided = service.decide_suggestion(suggestions[0].suggestion_id, "confirm")
print(f"  {decided.suggestion_id} is now {decided.state} at {decided.decided_at}")
try:
    service.decide_suggestion(decided.suggestion_id, "dismiss")
except Exception as e:
    print("  second decision rejected:", type(e).__name__)

print("\n== unrelated pending content produces no suggestions ==")
_, none = service.submit_text("new-2", "cat and dog")
print("  suggestions:", none)

print("\n== restart: journal + snapshot reproduce the state ==")
service.close()
revived = ClaimMatchingService(config)
for s in revived.list_suggestions():
    print(f"  {s.suggestion_id}: {s.source_id} -> {s.target_id} [{s.state}]")
print("  stats:", revived.stats())
revived.close()
