"""Canonical JSON serialization used for hashing and the journal.

One encoding everywhere: sorted keys, no whitespace, UTF-8.  Payload
digests in the audit chain and journal lines both rely on this being
stable.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def payload_digest(obj: Any) -> bytes:
    """SHA-256 over the canonical JSON encoding of ``obj``."""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).digest()
