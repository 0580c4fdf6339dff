"""Persistent exact-scan cosine similarity index.

Stores one unit-norm vector per document id in a contiguous fixed-stride
buffer and answers k-nearest queries by a full dot-product scan, so the
results are exact by construction. Durability is a point-in-time snapshot
file (VSIX) with a trailing CRC-32.

Snapshot layout, little-endian:

    "VSIX"  u8 version=1  u32 dim  u64 record_count
    per record:
        u16 id_len, id bytes
        u8 status (0=pending, 1=fact_checked)
        u32 text_len, text bytes (UTF-8)
        u32 meta_len, metadata as canonical JSON (keys sorted bytewise)
        dim x f32 vector
    u32 CRC-32 over all preceding bytes (polynomial 0xEDB88320)
"""

from __future__ import annotations

import io
import json
import os
import struct
import threading
import zlib
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadMagic,
    CrcMismatch,
    DimensionMismatch,
    EmptyId,
    InvalidDimension,
    IoError,
    NotNormalized,
    SnapshotError,
    TruncatedFile,
    UnsupportedVersion,
)

STATUS_PENDING = "pending"
STATUS_FACT_CHECKED = "fact_checked"
STATUSES = (STATUS_PENDING, STATUS_FACT_CHECKED)

SNAPSHOT_MAGIC = b"VSIX"
SNAPSHOT_VERSION = 1

MAX_ID_BYTES = 256
MAX_METADATA_ENTRIES = 64
MAX_METADATA_ITEM_BYTES = 4096

_NORM_TOL = 1e-4
_MIN_CAPACITY = 16


@dataclass
class DocumentRecord:
    id: str
    vector: np.ndarray
    text: str
    status: str = STATUS_PENDING
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class SimilarityHit:
    id: str
    score: float
    text: str
    status: str
    metadata: dict[str, str]


@dataclass(frozen=True)
class IndexStats:
    dim: int
    document_count: int
    fact_checked_count: int
    bytes_resident: int


class _RWLock:
    """Many concurrent readers, writers exclusive. Write-preferring: once a
    writer is waiting, new readers queue up behind it so a steady read load
    cannot starve writes. Not reentrant."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writers_waiting = 0

    @contextmanager
    def read(self):
        with self._cond:
            while self._writers_waiting > 0:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if self._readers == 0:
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            self._writers_waiting += 1
            try:
                while self._readers > 0:
                    self._cond.wait()
                yield
            finally:
                self._writers_waiting -= 1
                self._cond.notify_all()


class VectorIndex:
    """Exact cosine search over unit vectors, plus VSIX persistence."""

    def __init__(self, dim: int):
        if not isinstance(dim, int) or dim < 1:
            raise InvalidDimension(f"dim must be a positive integer, got {dim!r}")
        self._dim = dim
        self._matrix = np.zeros((_MIN_CAPACITY, dim), dtype=np.float64)
        self._ids: list[str] = []
        self._texts: list[str] = []
        self._statuses: list[str] = []
        self._metas: list[dict[str, str]] = []
        self._slot_of: dict[str, int] = {}
        self._count = 0
        self._lock = _RWLock()

    @property
    def dim(self) -> int:
        return self._dim

    def __len__(self) -> int:
        return self._count

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._slot_of

    # --- writes -------------------------------------------------------------

    def upsert(self, record: DocumentRecord) -> str:
        """Insert or atomically replace a record. Returns 'inserted' or
        'replaced'."""
        vec = self._canonical_vector(record.vector)
        self._validate_id(record.id)
        self._validate_metadata(record.metadata)
        if record.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}, got {record.status!r}")
        with self._lock.write():
            slot = self._slot_of.get(record.id)
            if slot is None:
                slot = self._count
                self._reserve(slot + 1)
                self._ids.append(record.id)
                self._texts.append(record.text)
                self._statuses.append(record.status)
                self._metas.append(dict(record.metadata))
                self._slot_of[record.id] = slot
                self._count += 1
                outcome = "inserted"
            else:
                self._texts[slot] = record.text
                self._statuses[slot] = record.status
                self._metas[slot] = dict(record.metadata)
                outcome = "replaced"
            self._matrix[slot] = vec.astype(np.float64)
            return outcome

    def remove(self, doc_id: str) -> bool:
        """Delete a record; the freed slot is refilled by the last row so the
        scan stays dense. Returns whether the id existed."""
        with self._lock.write():
            slot = self._slot_of.pop(doc_id, None)
            if slot is None:
                return False
            last = self._count - 1
            if slot != last:
                self._matrix[slot] = self._matrix[last]
                self._ids[slot] = self._ids[last]
                self._texts[slot] = self._texts[last]
                self._statuses[slot] = self._statuses[last]
                self._metas[slot] = self._metas[last]
                self._slot_of[self._ids[slot]] = slot
            del self._ids[last], self._texts[last], self._statuses[last], self._metas[last]
            self._count = last
            return True

    def set_status(self, doc_id: str, status: str) -> bool:
        """Flip a record's status in place; returns whether the id existed."""
        if status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}, got {status!r}")
        with self._lock.write():
            slot = self._slot_of.get(doc_id)
            if slot is None:
                return False
            self._statuses[slot] = status
            return True

    # --- reads --------------------------------------------------------------

    def get(self, doc_id: str) -> DocumentRecord | None:
        with self._lock.read():
            slot = self._slot_of.get(doc_id)
            if slot is None:
                return None
            return self._record_at(slot)

    def search(
        self,
        query,
        k: int,
        threshold: float = -1.0,
        status_filter: str | None = None,
    ) -> list[SimilarityHit]:
        """Up to k hits with score >= threshold, score descending, ties by
        ascending id (bytewise). Scores are raw cosine in [-1, 1]."""
        if status_filter is not None and status_filter not in STATUSES:
            raise ValueError(f"status_filter must be one of {STATUSES}")
        q = np.asarray(query, dtype=np.float64).reshape(-1)
        if q.shape[0] != self._dim:
            raise DimensionMismatch(
                f"query has {q.shape[0]} components, index dim is {self._dim}"
            )
        qn = float(np.linalg.norm(q))
        if abs(qn - 1.0) > _NORM_TOL:
            raise NotNormalized(f"query norm is {qn:.6f}, expected 1.0 +/- {_NORM_TOL}")
        if k <= 0:
            return []

        with self._lock.read():
            n = self._count
            if n == 0:
                return []
            scores = self._matrix[:n] @ q
            np.clip(scores, -1.0, 1.0, out=scores)
            mask = scores >= threshold
            if status_filter is not None:
                statuses = np.fromiter(
                    (s == status_filter for s in self._statuses), dtype=bool, count=n
                )
                mask &= statuses
            cand = np.flatnonzero(mask)
            if cand.size == 0:
                return []
            cand_scores = scores[cand]
            if cand.size > k:
                # keep everything tied with the k-th score so the id
                # tie-break below is exact, then cut
                part = np.argpartition(-cand_scores, k - 1)[:k]
                kth = cand_scores[part].min()
                keep = cand[cand_scores >= kth]
            else:
                keep = cand
            ranked = sorted(keep, key=lambda s: (-scores[s], self._ids[s]))[:k]
            return [
                SimilarityHit(
                    id=self._ids[s],
                    score=float(scores[s]),
                    text=self._texts[s],
                    status=self._statuses[s],
                    metadata=dict(self._metas[s]),
                )
                for s in ranked
            ]

    def stats(self) -> IndexStats:
        with self._lock.read():
            n = self._count
            fact_checked = sum(1 for s in self._statuses if s == STATUS_FACT_CHECKED)
            resident = self._matrix.nbytes
            for i in range(n):
                resident += len(self._ids[i]) + len(self._texts[i])
                resident += sum(len(k) + len(v) for k, v in self._metas[i].items())
            return IndexStats(
                dim=self._dim,
                document_count=n,
                fact_checked_count=fact_checked,
                bytes_resident=resident,
            )

    # --- persistence ----------------------------------------------------------

    def save_snapshot(self, path: str | os.PathLike) -> int:
        """Write a point-in-time snapshot; returns bytes written."""
        with self._lock.read():
            payload = self._serialize()
        blob = payload + struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF)
        tmp = f"{os.fspath(path)}.tmp"
        try:
            with open(tmp, "wb") as f:
                f.write(blob)
            os.replace(tmp, path)
        except OSError as e:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise IoError(f"cannot write snapshot to {path}: {e}") from e
        return len(blob)

    @classmethod
    def load_snapshot(cls, path: str | os.PathLike) -> "VectorIndex":
        try:
            with open(path, "rb") as f:
                data = f.read()
        except OSError as e:
            raise IoError(f"cannot read snapshot from {path}: {e}") from e
        return cls.from_snapshot_bytes(data)

    @classmethod
    def from_snapshot_bytes(cls, data: bytes) -> "VectorIndex":
        if len(data) < len(SNAPSHOT_MAGIC):
            raise TruncatedFile(f"snapshot is only {len(data)} bytes")
        if data[:4] != SNAPSHOT_MAGIC:
            raise BadMagic(f"expected {SNAPSHOT_MAGIC!r}, got {data[:4]!r}")
        if data[4:5] != bytes([SNAPSHOT_VERSION]):
            raise UnsupportedVersion(f"version byte {data[4:5]!r}")
        if len(data) < 21:
            raise TruncatedFile("snapshot shorter than header + checksum")
        # checksum before structure: any flipped payload byte must surface
        # as CrcMismatch, not as a confusing parse error downstream
        (stored_crc,) = struct.unpack("<I", data[-4:])
        if zlib.crc32(data[:-4]) & 0xFFFFFFFF != stored_crc:
            raise CrcMismatch("checksum does not match snapshot payload")

        cur = _Cursor(data[:-4], offset=5)
        dim = cur.u32()
        count = cur.u64()
        if dim < 1:
            raise SnapshotError("snapshot dim must be positive")
        index = cls(dim)
        row_bytes = dim * 4
        for _ in range(count):
            doc_id = cur.take(cur.u16()).decode("utf-8")
            status_code = cur.u8()
            if status_code not in (0, 1):
                raise SnapshotError(f"unknown status code {status_code}")
            text = cur.take(cur.u32()).decode("utf-8")
            meta = json.loads(cur.take(cur.u32()).decode("utf-8"))
            vec = np.frombuffer(cur.take(row_bytes), dtype="<f4", count=dim)
            index.upsert(
                DocumentRecord(
                    id=doc_id,
                    vector=vec,
                    text=text,
                    status=STATUSES[status_code],
                    metadata=meta,
                )
            )
        if cur.remaining() != 0:
            raise SnapshotError(f"{cur.remaining()} unexpected bytes after records")
        return index

    # --- internals ------------------------------------------------------------

    def _serialize(self) -> bytes:
        buf = io.BytesIO()
        buf.write(SNAPSHOT_MAGIC)
        buf.write(bytes([SNAPSHOT_VERSION]))
        buf.write(struct.pack("<IQ", self._dim, self._count))
        for slot in range(self._count):
            id_b = self._ids[slot].encode("utf-8")
            text_b = self._texts[slot].encode("utf-8")
            meta_b = canonical_metadata_json(self._metas[slot])
            buf.write(struct.pack("<H", len(id_b)))
            buf.write(id_b)
            buf.write(struct.pack("<B", STATUSES.index(self._statuses[slot])))
            buf.write(struct.pack("<I", len(text_b)))
            buf.write(text_b)
            buf.write(struct.pack("<I", len(meta_b)))
            buf.write(meta_b)
            buf.write(self._matrix[slot].astype("<f4").tobytes())
        return buf.getvalue()

    def _record_at(self, slot: int) -> DocumentRecord:
        return DocumentRecord(
            id=self._ids[slot],
            vector=self._matrix[slot].astype(np.float32),
            text=self._texts[slot],
            status=self._statuses[slot],
            metadata=dict(self._metas[slot]),
        )

    def _canonical_vector(self, vector) -> np.ndarray:
        vec = np.asarray(vector, dtype=np.float32).reshape(-1)
        if vec.shape[0] != self._dim:
            raise DimensionMismatch(
                f"vector has {vec.shape[0]} components, index dim is {self._dim}"
            )
        norm = float(np.linalg.norm(vec.astype(np.float64)))
        if abs(norm - 1.0) > _NORM_TOL:
            raise NotNormalized(f"vector norm is {norm:.6f}, expected 1.0 +/- {_NORM_TOL}")
        return vec

    @staticmethod
    def _validate_id(doc_id: str) -> None:
        if not isinstance(doc_id, str) or not doc_id:
            raise EmptyId("document id must be a non-empty string")
        if len(doc_id.encode("utf-8")) > MAX_ID_BYTES:
            raise EmptyId(f"document id exceeds {MAX_ID_BYTES} UTF-8 bytes")

    @staticmethod
    def _validate_metadata(metadata: dict[str, str]) -> None:
        if len(metadata) > MAX_METADATA_ENTRIES:
            raise ValueError(f"metadata has more than {MAX_METADATA_ENTRIES} entries")
        for k, v in metadata.items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValueError("metadata must be a flat string-to-string map")
            if len(k.encode("utf-8")) > MAX_METADATA_ITEM_BYTES:
                raise ValueError(f"metadata key exceeds {MAX_METADATA_ITEM_BYTES} bytes")
            if len(v.encode("utf-8")) > MAX_METADATA_ITEM_BYTES:
                raise ValueError(f"metadata value exceeds {MAX_METADATA_ITEM_BYTES} bytes")

    def _reserve(self, needed: int) -> None:
        capacity = self._matrix.shape[0]
        if needed <= capacity:
            return
        while capacity < needed:
            capacity *= 2
        grown = np.zeros((capacity, self._dim), dtype=np.float64)
        grown[: self._count] = self._matrix[: self._count]
        self._matrix = grown


def create_index(dim: int) -> VectorIndex:
    """Empty index bound to a fixed dimensionality."""
    return VectorIndex(dim)


def canonical_metadata_json(metadata: dict[str, str]) -> bytes:
    """Metadata as compact JSON with keys sorted bytewise (UTF-8 order equals
    code-point order, which is how Python compares str keys)."""
    return json.dumps(
        metadata, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


class _Cursor:
    """Bounds-checked reader over snapshot payload bytes."""

    def __init__(self, data: bytes, offset: int = 0):
        self._data = data
        self._pos = offset

    def take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise TruncatedFile(
                f"need {n} bytes at offset {self._pos}, "
                f"only {len(self._data) - self._pos} remain"
            )
        out = self._data[self._pos : self._pos + n]
        self._pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack("<H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def remaining(self) -> int:
        return len(self._data) - self._pos
