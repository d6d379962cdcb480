"""Tamper evidence: how the hash-chained audit log localizes mutations.

Each entry hashes (index, timestamp, event code, payload digest, previous
hash); any later edit of a stored entry breaks verification exactly at
the edited index.
"""

import hashlib

from votekit.audit import AuditEntry, AuditLog, EventType, verify_chain

log = AuditLog()
for i in range(8):
    payload_digest = hashlib.sha256(f"event-payload-{i}".encode()).digest()
    entry = log.append(EventType.VOTE_CAST, payload_digest, now=1_700_000_000 + i)
    print(f"entry {entry.index}: hash {entry.entry_hash.hex()[:16]}... "
          f"prev {entry.prev_hash.hex()[:16]}...")

valid, first_bad = verify_chain(log.entries())
print(f"\nintact chain: valid={valid}")

# flip one byte in entry 4's payload digest
entries = log.entries()
victim = entries[4]
tampered_digest = bytearray(victim.payload_digest)
tampered_digest[0] ^= 0x01
entries[4] = AuditEntry(
    index=victim.index,
    timestamp=victim.timestamp,
    event_type=victim.event_type,
    payload_digest=bytes(tampered_digest),
    prev_hash=victim.prev_hash,
    entry_hash=victim.entry_hash,
)
valid, first_bad = verify_chain(entries)
print(f"after flipping one byte of entry 4's payload digest: "
      f"valid={valid}, first_bad_index={first_bad}")

# rewriting history needs every later hash to be recomputed too;
# re-hashing entry 4 alone just moves the break to entry 5
entries[4] = AuditEntry(
    index=victim.index,
    timestamp=victim.timestamp,
    event_type=victim.event_type,
    payload_digest=bytes(tampered_digest),
    prev_hash=victim.prev_hash,
    entry_hash=hashlib.sha256(entries[4].serialize_for_hash()).digest(),
)
valid, first_bad = verify_chain(entries)
print(f"after recomputing entry 4's own hash:                 "
      f"valid={valid}, first_bad_index={first_bad}")
