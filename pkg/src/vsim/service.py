"""Claim-matching workflow around the model, vectorizer and index.

Every submitted text is vectorized and stored. Pending submissions are
compared against everything already fact-checked; close matches become
pending suggestions that a human later confirms or dismisses. Decisions
are final. An append-only journal plus periodic index snapshots make the
whole state reproducible after a restart.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import requests

from .embeddings import EmbeddingModel, load_model
from .errors import (
    AlreadyDecided,
    DimensionMismatch,
    DuplicateId,
    IllegalTransition,
    NotFound,
)
from .index import (
    STATUS_FACT_CHECKED,
    STATUS_PENDING,
    STATUSES,
    DocumentRecord,
    SimilarityHit,
    VectorIndex,
)
from .vectorize import embed_text

logger = logging.getLogger(__name__)

SUGGESTION_STATES = ("pending", "confirmed", "dismissed")

DEFAULT_PORT = 8040
DEFAULT_SUGGESTION_THRESHOLD = 0.75
DEFAULT_SUGGESTION_K = 5
DEFAULT_SNAPSHOT_INTERVAL_S = 60.0
DEFAULT_WEBHOOK_BACKOFF_S = (1.0, 4.0)
WEBHOOK_TIMEOUT_S = 10.0


def now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass
class ServiceConfig:
    model_path: str
    index_path: str
    journal_path: str
    port: int = DEFAULT_PORT
    suggestion_threshold: float = DEFAULT_SUGGESTION_THRESHOLD
    suggestion_k: int = DEFAULT_SUGGESTION_K
    callback_url: str | None = None
    ui_origin: str = "*"
    snapshot_interval_s: float = DEFAULT_SNAPSHOT_INTERVAL_S
    webhook_backoff_s: tuple[float, ...] = DEFAULT_WEBHOOK_BACKOFF_S

    def __post_init__(self):
        if not -1.0 <= self.suggestion_threshold <= 1.0:
            raise ValueError("suggestion_threshold must be in [-1, 1]")
        if self.suggestion_k < 1:
            raise ValueError("suggestion_k must be >= 1")

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None, **overrides) -> "ServiceConfig":
        """Build a config from VSIM_* environment variables; keyword
        overrides (from CLI flags) win over the environment."""
        env = dict(os.environ if env is None else env)
        values: dict = {}
        if "VSIM_MODEL_PATH" in env:
            values["model_path"] = env["VSIM_MODEL_PATH"]
        if "VSIM_INDEX_PATH" in env:
            values["index_path"] = env["VSIM_INDEX_PATH"]
        if "VSIM_JOURNAL_PATH" in env:
            values["journal_path"] = env["VSIM_JOURNAL_PATH"]
        if "VSIM_PORT" in env:
            values["port"] = int(env["VSIM_PORT"])
        if "VSIM_THRESHOLD" in env:
            values["suggestion_threshold"] = float(env["VSIM_THRESHOLD"])
        if "VSIM_SUGGESTION_K" in env:
            values["suggestion_k"] = int(env["VSIM_SUGGESTION_K"])
        if "VSIM_CALLBACK_URL" in env:
            values["callback_url"] = env["VSIM_CALLBACK_URL"]
        if "VSIM_UI_ORIGIN" in env:
            values["ui_origin"] = env["VSIM_UI_ORIGIN"]
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class Suggestion:
    suggestion_id: str
    source_id: str
    target_id: str
    score: float
    state: str = "pending"
    created_at: str = field(default_factory=now_rfc3339)
    decided_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "suggestion_id": self.suggestion_id,
            "source_id": self.source_id,
            "target_id": self.target_id,
            "score": self.score,
            "state": self.state,
            "created_at": self.created_at,
            "decided_at": self.decided_at,
        }


class ClaimMatchingService:
    """In-process core behind the HTTP API.

    Writes (submit, decide, status change, delete) are serialized on one
    lock; the index provides its own reader-writer isolation for searches.
    """

    def __init__(self, config: ServiceConfig, model: EmbeddingModel | None = None):
        self.config = config
        self.model = model if model is not None else load_model(config.model_path)
        if os.path.exists(config.index_path):
            self.index = VectorIndex.load_snapshot(config.index_path)
            if self.index.dim != self.model.dim:
                raise DimensionMismatch(
                    f"index dim {self.index.dim} != model dim {self.model.dim}"
                )
        else:
            self.index = VectorIndex(self.model.dim)
        self._suggestions: dict[str, Suggestion] = {}
        self._created_at: dict[str, str] = {}
        self._next_suggestion = 1
        self._lock = threading.Lock()
        self._dirty = False
        self._stop = threading.Event()
        self._snapshot_thread: threading.Thread | None = None
        self._replay_journal()
        self._journal_file = open(config.journal_path, "a", encoding="utf-8")

    # --- ingestion ------------------------------------------------------------

    def submit_text(
        self,
        item_id: str,
        text: str,
        status: str = STATUS_PENDING,
        metadata: dict[str, str] | None = None,
    ) -> tuple[dict, list[Suggestion]]:
        """Vectorize, store, and (for pending items) propose fact-checked
        near-duplicates as suggestions."""
        metadata = metadata or {}
        if status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}, got {status!r}")
        with self._lock:
            if item_id in self.index:
                raise DuplicateId(f"item {item_id!r} already exists")
            doc = embed_text(self.model, text)
            created_at = now_rfc3339()
            self.index.upsert(
                DocumentRecord(
                    id=item_id, vector=doc.values, text=text,
                    status=status, metadata=metadata,
                )
            )
            self._created_at[item_id] = created_at
            self._dirty = True
            self._journal(
                "item_created",
                {
                    "id": item_id,
                    "text": text,
                    "status": status,
                    "metadata": metadata,
                    "created_at": created_at,
                },
            )
            suggestions: list[Suggestion] = []
            if status == STATUS_PENDING:
                hits = self.index.search(
                    doc.values,
                    k=self.config.suggestion_k,
                    threshold=self.config.suggestion_threshold,
                    status_filter=STATUS_FACT_CHECKED,
                )
                for hit in hits:
                    if hit.id == item_id:
                        continue
                    suggestion = Suggestion(
                        suggestion_id=self._new_suggestion_id(),
                        source_id=item_id,
                        target_id=hit.id,
                        score=hit.score,
                        created_at=created_at,
                    )
                    self._suggestions[suggestion.suggestion_id] = suggestion
                    self._journal(
                        "suggestion_created",
                        {
                            "suggestion_id": suggestion.suggestion_id,
                            "source_id": suggestion.source_id,
                            "target_id": suggestion.target_id,
                            "score": suggestion.score,
                            "created_at": suggestion.created_at,
                        },
                    )
                    suggestions.append(suggestion)
        if suggestions and self.config.callback_url:
            self._fire_webhook(item_id, suggestions)
        return self.get_item(item_id), suggestions

    def query_similar(
        self,
        text: str,
        k: int | None = None,
        threshold: float | None = None,
        status_filter: str | None = None,
    ) -> list[SimilarityHit]:
        """Read-only search; stores nothing, creates no suggestions."""
        doc = embed_text(self.model, text)
        return self.index.search(
            doc.values,
            k=k if k is not None else self.config.suggestion_k,
            threshold=threshold if threshold is not None else self.config.suggestion_threshold,
            status_filter=status_filter,
        )

    # --- items ------------------------------------------------------------------

    def get_item(self, item_id: str) -> dict:
        record = self.index.get(item_id)
        if record is None:
            raise NotFound(f"no item {item_id!r}")
        return {
            "id": record.id,
            "text": record.text,
            "status": record.status,
            "metadata": record.metadata,
            "created_at": self._created_at.get(item_id),
        }

    def update_status(self, item_id: str, new_status: str) -> dict:
        """pending -> fact_checked is the only legal transition."""
        with self._lock:
            record = self.index.get(item_id)
            if record is None:
                raise NotFound(f"no item {item_id!r}")
            if new_status != STATUS_FACT_CHECKED:
                raise IllegalTransition(f"cannot move an item to {new_status!r}")
            if record.status != STATUS_FACT_CHECKED:
                self.index.set_status(item_id, STATUS_FACT_CHECKED)
                self._dirty = True
                self._journal(
                    "item_status_changed",
                    {"id": item_id, "status": STATUS_FACT_CHECKED},
                )
        return self.get_item(item_id)

    def delete_item(self, item_id: str) -> None:
        with self._lock:
            if not self.index.remove(item_id):
                raise NotFound(f"no item {item_id!r}")
            self._created_at.pop(item_id, None)
            self._dirty = True
            self._journal("item_deleted", {"id": item_id})

    # --- suggestions --------------------------------------------------------------

    def list_suggestions(
        self, state: str | None = None, source_id: str | None = None
    ) -> list[Suggestion]:
        """Newest first; equal timestamps ordered by suggestion id."""
        if state is not None and state not in SUGGESTION_STATES:
            raise ValueError(f"state must be one of {SUGGESTION_STATES}, got {state!r}")
        with self._lock:
            rows = list(self._suggestions.values())
        if state is not None:
            rows = [s for s in rows if s.state == state]
        if source_id is not None:
            rows = [s for s in rows if s.source_id == source_id]
        rows.sort(key=lambda s: s.suggestion_id)
        rows.sort(key=lambda s: s.created_at, reverse=True)
        return rows

    def decide_suggestion(self, suggestion_id: str, decision: str) -> Suggestion:
        """Confirm or dismiss a pending suggestion; decisions are immutable."""
        if decision not in ("confirm", "dismiss"):
            raise ValueError(f"decision must be confirm or dismiss, got {decision!r}")
        with self._lock:
            suggestion = self._suggestions.get(suggestion_id)
            if suggestion is None:
                raise NotFound(f"no suggestion {suggestion_id!r}")
            if suggestion.state != "pending":
                raise AlreadyDecided(f"suggestion is already {suggestion.state}")
            suggestion.state = "confirmed" if decision == "confirm" else "dismissed"
            suggestion.decided_at = now_rfc3339()
            self._journal(
                "decision",
                {
                    "suggestion_id": suggestion_id,
                    "decision": decision,
                    "decided_at": suggestion.decided_at,
                },
            )
            return suggestion

    # --- observability --------------------------------------------------------------

    def health(self) -> dict:
        stats = self.index.stats()
        return {"status": "ok", "dim": stats.dim, "documents": stats.document_count}

    def stats(self) -> dict:
        stats = self.index.stats()
        counts = {state: 0 for state in SUGGESTION_STATES}
        with self._lock:
            for suggestion in self._suggestions.values():
                counts[suggestion.state] += 1
        return {
            "dim": stats.dim,
            "document_count": stats.document_count,
            "fact_checked_count": stats.fact_checked_count,
            "bytes_resident": stats.bytes_resident,
            "suggestions": counts,
        }

    # --- durability --------------------------------------------------------------

    def start_background(self) -> None:
        """Start the periodic snapshot thread (no-op if already running)."""
        if self._snapshot_thread is not None:
            return
        self._snapshot_thread = threading.Thread(
            target=self._snapshot_loop, name="vsim-snapshot", daemon=True
        )
        self._snapshot_thread.start()

    def close(self) -> None:
        """Flush everything: final snapshot, stop the timer, close the journal."""
        self._stop.set()
        if self._snapshot_thread is not None:
            self._snapshot_thread.join(timeout=5)
            self._snapshot_thread = None
        self.save_snapshot()
        with self._lock:
            if not self._journal_file.closed:
                self._journal_file.close()

    def save_snapshot(self) -> None:
        self.index.save_snapshot(self.config.index_path)
        self._dirty = False

    def _snapshot_loop(self) -> None:
        while not self._stop.wait(self.config.snapshot_interval_s):
            if self._dirty:
                try:
                    self.save_snapshot()
                except Exception:
                    logger.exception("periodic snapshot failed")

    def _journal(self, event: str, data: dict) -> None:
        line = json.dumps(
            {"event": event, "data": data, "at": now_rfc3339()}, ensure_ascii=False
        )
        self._journal_file.write(line + "\n")
        self._journal_file.flush()

    def _replay_journal(self) -> None:
        path = self.config.journal_path
        if not os.path.exists(path):
            return
        max_counter = 0
        with open(path, "r", encoding="utf-8") as f:
            for line_no, line in enumerate(f, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    # a crash can leave one partial trailing record
                    logger.warning("journal line %d is partial; stopping replay", line_no)
                    break
                event, data = entry.get("event"), entry.get("data", {})
                if event == "item_created":
                    self._replay_item_created(data)
                elif event == "item_status_changed":
                    self.index.set_status(data["id"], data["status"])
                elif event == "item_deleted":
                    self.index.remove(data["id"])
                    self._created_at.pop(data["id"], None)
                elif event == "suggestion_created":
                    suggestion = Suggestion(
                        suggestion_id=data["suggestion_id"],
                        source_id=data["source_id"],
                        target_id=data["target_id"],
                        score=data["score"],
                        created_at=data["created_at"],
                    )
                    self._suggestions[suggestion.suggestion_id] = suggestion
                    max_counter = max(max_counter, _suggestion_counter(suggestion.suggestion_id))
                elif event == "decision":
                    suggestion = self._suggestions.get(data["suggestion_id"])
                    if suggestion is not None:
                        suggestion.state = (
                            "confirmed" if data["decision"] == "confirm" else "dismissed"
                        )
                        suggestion.decided_at = data["decided_at"]
                else:
                    logger.warning("journal line %d: unknown event %r", line_no, event)
        self._next_suggestion = max_counter + 1

    def _replay_item_created(self, data: dict) -> None:
        item_id, text = data["id"], data["text"]
        existing = self.index.get(item_id)
        if existing is not None and existing.text == text:
            # snapshot already holds the (deterministic) vector for this text
            vector = existing.vector
        else:
            vector = embed_text(self.model, text).values
        self.index.upsert(
            DocumentRecord(
                id=item_id,
                vector=vector,
                text=text,
                status=data["status"],
                metadata=data.get("metadata", {}),
            )
        )
        self._created_at[item_id] = data.get("created_at")

    # --- webhook --------------------------------------------------------------

    def _fire_webhook(self, item_id: str, suggestions: list[Suggestion]) -> None:
        payload = {
            "event": "suggestions.created",
            "item_id": item_id,
            "suggestions": [
                {
                    "suggestion_id": s.suggestion_id,
                    "target_id": s.target_id,
                    "score": s.score,
                }
                for s in suggestions
            ],
            "sent_at": now_rfc3339(),
        }
        threading.Thread(
            target=self._deliver_webhook,
            args=(self.config.callback_url, payload),
            name="vsim-webhook",
            daemon=True,
        ).start()

    def _deliver_webhook(self, url: str, payload: dict) -> None:
        backoff = self.config.webhook_backoff_s
        for attempt in range(len(backoff) + 1):
            try:
                response = requests.post(url, json=payload, timeout=WEBHOOK_TIMEOUT_S)
                if response.status_code < 500:
                    return
                logger.warning(
                    "webhook attempt %d got HTTP %d", attempt + 1, response.status_code
                )
            except requests.RequestException as e:
                logger.warning("webhook attempt %d failed: %s", attempt + 1, e)
            if attempt < len(backoff):
                time.sleep(backoff[attempt])
        logger.error("webhook delivery gave up after %d attempts", len(backoff) + 1)

    def _new_suggestion_id(self) -> str:
        sid = f"s{self._next_suggestion:08d}"
        self._next_suggestion += 1
        return sid


def _suggestion_counter(suggestion_id: str) -> int:
    try:
        return int(suggestion_id.lstrip("s"))
    except ValueError:
        return 0
