"""Voter registry: enrollment and biometric authentication.

One record per NIC (the primary key), immutable after creation.  Every
enroll and every authentication attempt, accepted or rejected, appends
one entry to the audit chain.
"""

from __future__ import annotations

import re
import secrets
import threading
import time
from dataclasses import dataclass

from .audit import AuditLog, EventType
from .biometrics import (
    BiometricCapture,
    BiometricTemplate,
    CaptureKind,
    CompositeId,
    composite_id,
    extract_template,
    similarity,
)
from .canon import payload_digest
from .errors import DuplicateNic, InvalidNicFormat, KindMismatch, UnknownNic

# Sri Lankan NIC conventions: 9 digits + V/X, or 12 digits.
_NIC_PATTERN = re.compile(r"^(\d{9}[VX]|\d{12})$")

MATCH_THRESHOLD = 0.90
DEFAULT_SESSION_TTL = 15 * 60  # seconds


def validate_nic(nic: str) -> str:
    """Normalize (uppercase) and validate a NIC; returns the stored form."""
    normalized = nic.strip().upper()
    if not _NIC_PATTERN.match(normalized):
        raise InvalidNicFormat(f"invalid NIC: {nic!r}")
    return normalized


@dataclass(frozen=True)
class VoterRecord:
    nic: str
    full_name: str
    area_code: str
    fingerprint_template: BiometricTemplate
    face_template: BiometricTemplate
    composite_id: CompositeId
    enrolled_at: int
    enrolled_by: str


@dataclass(frozen=True)
class AuthDecision:
    accepted: bool
    fingerprint_score: float
    face_score: float
    session_token: str | None = None

    def __post_init__(self):
        if self.accepted != (self.session_token is not None):
            raise ValueError("session token present iff accepted")


@dataclass(frozen=True)
class Session:
    token: str
    nic: str
    issued_at: int
    expires_at: int


class Registry:
    """Enrolled voters plus the live biometric sessions they hold.

    Reads are freely concurrent; enroll serializes on NIC uniqueness via
    an insert-if-absent under one lock.
    """

    def __init__(
        self,
        audit_log: AuditLog,
        session_ttl: int = DEFAULT_SESSION_TTL,
        match_threshold: float = MATCH_THRESHOLD,
        token_source=None,
        on_event=None,
    ):
        self._audit = audit_log
        self._session_ttl = session_ttl
        self._threshold = match_threshold
        self._records: dict[str, VoterRecord] = {}
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        # 128-bit random session tokens; injectable for reproducible simulations
        self._token_source = token_source or (lambda: secrets.token_bytes(16))
        self._on_event = on_event or (lambda event: None)

    def __contains__(self, nic: str) -> bool:
        return nic in self._records

    def __len__(self) -> int:
        return len(self._records)

    def get(self, nic: str) -> VoterRecord:
        try:
            return self._records[nic]
        except KeyError:
            raise UnknownNic(f"no voter enrolled with NIC {nic}") from None

    def records(self) -> list[VoterRecord]:
        return list(self._records.values())

    def enroll(
        self,
        nic: str,
        full_name: str,
        area_code: str,
        fp_capture: BiometricCapture,
        face_capture: BiometricCapture,
        officer: str,
        now: int | None = None,
    ) -> VoterRecord:
        nic = validate_nic(nic)
        if not area_code:
            raise ValueError("area_code must be non-empty")
        if fp_capture.kind is not CaptureKind.FINGERPRINT:
            raise KindMismatch("fp_capture must be a fingerprint capture")
        if face_capture.kind is not CaptureKind.FACE:
            raise KindMismatch("face_capture must be a face capture")
        now = int(time.time()) if now is None else int(now)

        fp_template = extract_template(fp_capture)
        face_template = extract_template(face_capture)
        record = VoterRecord(
            nic=nic,
            full_name=full_name,
            area_code=area_code,
            fingerprint_template=fp_template,
            face_template=face_template,
            composite_id=composite_id(fp_template, face_template, nic),
            enrolled_at=now,
            enrolled_by=officer,
        )
        with self._lock:
            if nic in self._records:
                raise DuplicateNic(f"NIC {nic} already enrolled")
            self._records[nic] = record
        entry = self._audit.append(
            EventType.VOTER_ENROLLED,
            payload_digest(
                {
                    "nic": nic,
                    "area_code": area_code,
                    "composite_id": record.composite_id.hex,
                    "enrolled_by": officer,
                }
            ),
            now,
        )
        self._on_event(
            {"type": "voter_enrolled", "ts": now, "record": record_to_doc(record), "audit": entry}
        )
        return record

    def restore(self, record: VoterRecord) -> None:
        """Re-insert a persisted record during journal replay (no audit append)."""
        with self._lock:
            self._records[record.nic] = record

    def authenticate(
        self,
        nic: str,
        fp_capture: BiometricCapture,
        face_capture: BiometricCapture,
        now: int | None = None,
    ) -> AuthDecision:
        """Compare fresh captures against the stored templates.

        Both modalities must score at or above the threshold.  A rejected
        attempt mutates no lockout state (the voter just starts over), but
        the attempt is always audited.
        """
        nic = validate_nic(nic)
        record = self.get(nic)
        now = int(time.time()) if now is None else int(now)

        fp_score = similarity(extract_template(fp_capture), record.fingerprint_template)
        face_score = similarity(extract_template(face_capture), record.face_template)
        accepted = fp_score >= self._threshold and face_score >= self._threshold

        token = None
        if accepted:
            token = self._token_source().hex()
            self._sessions[token] = Session(
                token=token, nic=nic, issued_at=now, expires_at=now + self._session_ttl
            )
        entry = self._audit.append(
            EventType.AUTH_ATTEMPT,
            payload_digest(
                {
                    "nic": nic,
                    "accepted": accepted,
                    "fingerprint_score": fp_score,
                    "face_score": face_score,
                }
            ),
            now,
        )
        self._on_event(
            {
                "type": "auth_attempt",
                "ts": now,
                "nic": nic,
                "accepted": accepted,
                "audit": entry,
            }
        )
        return AuthDecision(
            accepted=accepted,
            fingerprint_score=fp_score,
            face_score=face_score,
            session_token=token,
        )

    def session(self, token: str, now: int | None = None) -> Session | None:
        """Look up a live session; expired or unknown tokens return None."""
        now = int(time.time()) if now is None else int(now)
        info = self._sessions.get(token)
        if info is None or now >= info.expires_at:
            return None
        return info


def record_to_doc(record: VoterRecord) -> dict:
    return {
        "nic": record.nic,
        "full_name": record.full_name,
        "area_code": record.area_code,
        "fingerprint_bits": record.fingerprint_template.bits.hex(),
        "face_bits": record.face_template.bits.hex(),
        "composite_id": record.composite_id.hex,
        "enrolled_at": record.enrolled_at,
        "enrolled_by": record.enrolled_by,
    }


def record_from_doc(doc: dict) -> VoterRecord:
    from .biometrics import BiometricTemplate, CaptureKind, CompositeId

    return VoterRecord(
        nic=doc["nic"],
        full_name=doc["full_name"],
        area_code=doc["area_code"],
        fingerprint_template=BiometricTemplate(
            kind=CaptureKind.FINGERPRINT, bits=bytes.fromhex(doc["fingerprint_bits"])
        ),
        face_template=BiometricTemplate(kind=CaptureKind.FACE, bits=bytes.fromhex(doc["face_bits"])),
        composite_id=CompositeId(digest=bytes.fromhex(doc["composite_id"])),
        enrolled_at=doc["enrolled_at"],
        enrolled_by=doc["enrolled_by"],
    )
