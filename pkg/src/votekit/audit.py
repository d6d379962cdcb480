"""Append-only, hash-chained audit log.

Each entry commits to its predecessor, so any mutation of a persisted
entry is detectable by rehashing the chain.  This is an in-service chain
with a single logical writer, not a distributed ledger.

Hashing layout (fixed, byte-exact):

    8-byte BE index || 8-byte BE timestamp || 1-byte event code
    || 32-byte payload digest || 32-byte prev hash

hashed with SHA-256.  Event codes follow the enum declaration order.
"""

from __future__ import annotations

import enum
import hashlib
import threading
from dataclasses import dataclass

HASH_ALGORITHM = "sha256"
GENESIS_PREV_HASH = bytes(32)


class EventType(enum.Enum):
    # Declaration order defines the 0-based wire code; do not reorder.
    VOTER_ENROLLED = "voter_enrolled"
    AUTH_ATTEMPT = "auth_attempt"
    ELECTION_CREATED = "election_created"
    TOKEN_ISSUED = "token_issued"
    TOKEN_REDEEMED = "token_redeemed"
    VOTE_CAST = "vote_cast"
    ELECTION_CLOSED = "election_closed"

    @property
    def code(self) -> int:
        return list(EventType).index(self)

    @classmethod
    def from_value(cls, value: str) -> "EventType":
        return cls(value)


@dataclass(frozen=True)
class AuditEntry:
    index: int
    timestamp: int
    event_type: EventType
    payload_digest: bytes
    prev_hash: bytes
    entry_hash: bytes

    def serialize_for_hash(self) -> bytes:
        return (
            self.index.to_bytes(8, "big")
            + self.timestamp.to_bytes(8, "big")
            + self.event_type.code.to_bytes(1, "big")
            + self.payload_digest
            + self.prev_hash
        )


def compute_entry_hash(
    index: int, timestamp: int, event_type: EventType, payload_digest: bytes, prev_hash: bytes
) -> bytes:
    preimage = (
        index.to_bytes(8, "big")
        + timestamp.to_bytes(8, "big")
        + event_type.code.to_bytes(1, "big")
        + payload_digest
        + prev_hash
    )
    return hashlib.sha256(preimage).digest()


class AuditLog:
    """In-memory chain with serialized appends.

    Appends funnel through one lock (single logical writer); reads take a
    snapshot reference, entries themselves are immutable.
    """

    def __init__(self, algorithm: str = HASH_ALGORITHM):
        if algorithm != HASH_ALGORITHM:
            raise ValueError(f"unsupported hash algorithm: {algorithm}")
        self.algorithm = algorithm
        self._entries: list[AuditEntry] = []
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._entries)

    def append(self, event_type: EventType, payload_digest: bytes, now: int) -> AuditEntry:
        if len(payload_digest) != 32:
            raise ValueError("payload digest must be 32 bytes")
        with self._lock:
            index = len(self._entries)
            prev_hash = self._entries[-1].entry_hash if self._entries else GENESIS_PREV_HASH
            entry = AuditEntry(
                index=index,
                timestamp=int(now),
                event_type=event_type,
                payload_digest=payload_digest,
                prev_hash=prev_hash,
                entry_hash=compute_entry_hash(index, int(now), event_type, payload_digest, prev_hash),
            )
            self._entries.append(entry)
            return entry

    def restore(self, entries: list[AuditEntry]) -> None:
        """Adopt previously persisted entries verbatim (no rehashing)."""
        with self._lock:
            self._entries = list(entries)

    def entries(self) -> list[AuditEntry]:
        return list(self._entries)

    @property
    def head_hash(self) -> bytes:
        return self._entries[-1].entry_hash if self._entries else GENESIS_PREV_HASH


def entry_to_doc(entry: AuditEntry) -> dict:
    return {
        "index": entry.index,
        "timestamp": entry.timestamp,
        "event_type": entry.event_type.value,
        "payload_digest": entry.payload_digest.hex(),
        "prev_hash": entry.prev_hash.hex(),
        "entry_hash": entry.entry_hash.hex(),
    }


def entry_from_doc(doc: dict) -> AuditEntry:
    return AuditEntry(
        index=doc["index"],
        timestamp=doc["timestamp"],
        event_type=EventType(doc["event_type"]),
        payload_digest=bytes.fromhex(doc["payload_digest"]),
        prev_hash=bytes.fromhex(doc["prev_hash"]),
        entry_hash=bytes.fromhex(doc["entry_hash"]),
    )


def verify_chain(entries: list[AuditEntry]) -> tuple[bool, int | None]:
    """Check structural integrity of an ordered chain.

    Returns (valid, first_bad_index).  An entry is bad if its index breaks
    the 0,1,2,... sequence, its prev_hash does not match its predecessor
    (zero bytes for the genesis entry), or its stored entry_hash does not
    recompute from its own fields.
    """
    prev_hash = GENESIS_PREV_HASH
    for position, entry in enumerate(entries):
        if (
            entry.index != position
            or entry.prev_hash != prev_hash
            or entry.entry_hash
            != compute_entry_hash(
                entry.index, entry.timestamp, entry.event_type, entry.payload_digest, entry.prev_hash
            )
        ):
            return False, position
        prev_hash = entry.entry_hash
    return True, None
