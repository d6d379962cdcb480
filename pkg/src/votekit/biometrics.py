"""Biometric capture processing: templates, matching and the composite ID.

Real minutiae/face-embedding extraction is out of scope; captures are
opaque byte payloads and the template is a deterministic digest fold.
What matters for the rest of the system is the contract: 512 bits,
deterministic, strong avalanche (a one-byte change in the payload flips
about half the template bits), and Hamming-based similarity scoring.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

from .errors import EmptyCapture, KindMismatch

TEMPLATE_BITS = 512
TEMPLATE_BYTES = TEMPLATE_BITS // 8
_BLOCK_SIZE = 64
MAX_PAYLOAD_BYTES = 1_048_576


class CaptureKind(str, enum.Enum):
    FINGERPRINT = "fingerprint"
    FACE = "face"


@dataclass(frozen=True)
class BiometricCapture:
    """Raw sensor payload as delivered at the API boundary."""

    kind: CaptureKind
    payload: bytes
    captured_at: int = 0

    def __post_init__(self):
        if not self.payload:
            raise EmptyCapture("capture payload must be non-empty")
        if len(self.payload) > MAX_PAYLOAD_BYTES:
            raise EmptyCapture(
                f"capture payload exceeds {MAX_PAYLOAD_BYTES} bytes"
            )


@dataclass(frozen=True)
class BiometricTemplate:
    """Fixed 512-bit feature vector derived from a capture."""

    kind: CaptureKind
    bits: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.bits) != TEMPLATE_BYTES:
            raise ValueError(f"template must be exactly {TEMPLATE_BITS} bits")


@dataclass(frozen=True)
class CompositeId:
    """Stable 256-bit public identifier for an enrolled voter."""

    digest: bytes

    def __post_init__(self):
        if len(self.digest) != 32:
            raise ValueError("composite id must be a 256-bit digest")

    @property
    def hex(self) -> str:
        return self.digest.hex()


def _xor_bytes(a: bytes, b: bytes) -> bytes:
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(len(a), "big")


def extract_template(capture: BiometricCapture) -> BiometricTemplate:
    """Fold a capture payload into a 512-bit template.

    The payload is chunked into 64-byte blocks.  Each block is hashed twice
    with SHA-256, keyed by the capture kind, the block index and a half
    label, and the digests are XOR-accumulated into the two 256-bit halves
    of the template.  Every block therefore influences both halves, which
    is what gives the whole template its avalanche behavior.
    """
    if not capture.payload:
        raise EmptyCapture("capture payload must be non-empty")
    half_a = bytes(32)
    half_b = bytes(32)
    kind_tag = capture.kind.value.encode("ascii")
    for index in range(0, len(capture.payload), _BLOCK_SIZE):
        block = capture.payload[index : index + _BLOCK_SIZE]
        prefix = kind_tag + (index // _BLOCK_SIZE).to_bytes(8, "big")
        half_a = _xor_bytes(half_a, hashlib.sha256(prefix + b"A" + block).digest())
        half_b = _xor_bytes(half_b, hashlib.sha256(prefix + b"B" + block).digest())
    return BiometricTemplate(kind=capture.kind, bits=half_a + half_b)


def composite_id(fp: BiometricTemplate, face: BiometricTemplate, nic: str) -> CompositeId:
    """256-bit digest of fingerprint bits || face bits || UTF-8 NIC.

    Order-sensitive by construction: swapping the two templates or changing
    any input yields a different digest.
    """
    if fp.kind is not CaptureKind.FINGERPRINT:
        raise KindMismatch("first template must be a fingerprint template")
    if face.kind is not CaptureKind.FACE:
        raise KindMismatch("second template must be a face template")
    if not nic:
        raise ValueError("nic must be non-empty")
    digest = hashlib.sha256(fp.bits + face.bits + nic.encode("utf-8")).digest()
    return CompositeId(digest=digest)


def hamming_distance(a: BiometricTemplate, b: BiometricTemplate) -> int:
    return (int.from_bytes(a.bits, "big") ^ int.from_bytes(b.bits, "big")).bit_count()


def similarity(a: BiometricTemplate, b: BiometricTemplate) -> float:
    """Normalized similarity 1 - hamming/512 in [0, 1]; symmetric."""
    if a.kind is not b.kind:
        raise KindMismatch(f"cannot compare {a.kind.value} with {b.kind.value}")
    return 1.0 - hamming_distance(a, b) / TEMPLATE_BITS
