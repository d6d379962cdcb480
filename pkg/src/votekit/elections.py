"""Election lifecycle, one-time QR tokens, secret ballots and live tallies.

The anonymity design splits every vote into two records: a VotedMarker
(who participated, no choice) and a Ballot (which choice, no identity).
Double voting is blocked by the marker's uniqueness while the ballot
stays unlinkable to the voter; ballot timestamps are truncated to the
minute to resist timing correlation.
"""

from __future__ import annotations

import enum
import hashlib
import re
import secrets
import threading
import time
from dataclasses import dataclass

from .audit import AuditLog, EventType
from .canon import payload_digest
from .errors import (
    AlreadyConsumed,
    AlreadyVoted,
    ElectionNotOpen,
    ExpiredToken,
    InvalidCredential,
    InvalidWindow,
    NotDraft,
    NotEligible,
    NotOpen,
    StaleToken,
    TooFewCandidates,
    Unauthorized,
    UnknownCandidate,
    UnknownElection,
    UnknownToken,
)
from .registry import Registry, VoterRecord
from .roles import Role

DEFAULT_QR_TTL = 10 * 60  # seconds

_QR_PAYLOAD_RE = re.compile(r"^evote://v1/([0-9a-f]{32})/([0-9a-f]{32})$")


class ElectionStatus(str, enum.Enum):
    DRAFT = "draft"
    OPEN = "open"
    CLOSED = "closed"


class Channel(str, enum.Enum):
    STATION = "station"
    MOBILE = "mobile"


@dataclass(frozen=True)
class Candidate:
    candidate_id: str
    display_name: str


@dataclass
class Election:
    election_id: str  # 128-bit value, lowercase hex
    name: str
    area_codes: frozenset[str]
    candidates: tuple[Candidate, ...]
    opens_at: int
    closes_at: int
    status: ElectionStatus = ElectionStatus.DRAFT

    def candidate_ids(self) -> list[str]:
        return [c.candidate_id for c in self.candidates]

    def is_open(self, now: int) -> bool:
        return self.status is ElectionStatus.OPEN and self.opens_at <= now < self.closes_at


@dataclass
class QrToken:
    token: str  # 128-bit value, lowercase hex
    election_id: str
    voter_nic: str
    issued_at: int
    expires_at: int
    consumed: bool = False
    superseded: bool = False  # invalidated by a later issue for the same pair

    def qr_payload(self) -> str:
        return f"evote://v1/{self.election_id}/{self.token}"


def parse_qr_payload(payload: str) -> tuple[str, str]:
    """Split an ``evote://v1/<election>/<token>`` payload; raises UnknownToken."""
    match = _QR_PAYLOAD_RE.match(payload.strip())
    if not match:
        raise UnknownToken("not a valid QR voting payload")
    return match.group(1), match.group(2)


@dataclass(frozen=True)
class VoteCredential:
    """Single-use authorization to cast, produced by redeeming a QR token."""

    value: str
    voter_nic: str
    election_id: str
    channel: Channel


@dataclass(frozen=True)
class Ballot:
    # Deliberately carries no voter identity.
    ballot_id: str
    election_id: str
    candidate_id: str
    area_code: str
    cast_minute: int
    channel: Channel
    receipt: bytes


@dataclass(frozen=True)
class VotedMarker:
    voter_nic: str
    election_id: str
    channel: Channel
    marked_at: int


@dataclass(frozen=True)
class TallySnapshot:
    election_id: str
    as_of: int
    counts: dict[str, int]
    per_area_counts: dict[tuple[str, str], int]
    total: int

    def as_document(self) -> dict:
        """Wire format: counts as sorted candidate rows plus per-area rows."""
        return {
            "election_id": self.election_id,
            "as_of": self.as_of,
            "counts": [
                {"candidate_id": cid, "votes": self.counts[cid]} for cid in sorted(self.counts)
            ],
            "per_area": [
                {"area_code": area, "candidate_id": cid, "votes": votes}
                for (area, cid), votes in sorted(self.per_area_counts.items())
            ],
            "total": self.total,
        }


class ElectionService:
    """All election state plus the operations that mutate it.

    cast_vote and redeem_qr_token are check-and-set under one lock, which
    makes them linearizable; tallies read immutable ballots without
    locking.  ``on_event`` (if given) is called synchronously inside the
    mutating operation with a replayable event document.
    """

    def __init__(
        self,
        registry: Registry,
        audit_log: AuditLog,
        qr_ttl: int = DEFAULT_QR_TTL,
        token_source=None,
        receipt_salt: bytes | None = None,
        on_event=None,
    ):
        self.registry = registry
        self.audit = audit_log
        self.qr_ttl = qr_ttl
        self._token_source = token_source or (lambda: secrets.token_bytes(16))
        self.receipt_salt = receipt_salt if receipt_salt is not None else secrets.token_bytes(32)
        self._on_event = on_event or (lambda event: None)

        self._elections: dict[str, Election] = {}
        self._tokens: dict[str, QrToken] = {}
        self._active_token: dict[tuple[str, str], str] = {}
        self._credentials: dict[str, VoteCredential] = {}
        self._markers: dict[tuple[str, str], VotedMarker] = {}
        self._ballots: dict[str, list[Ballot]] = {}
        self._lock = threading.Lock()

    # -- lookups ---------------------------------------------------------

    def election(self, election_id: str) -> Election:
        try:
            return self._elections[election_id]
        except KeyError:
            raise UnknownElection(f"no election {election_id}") from None

    def elections(self) -> list[Election]:
        return list(self._elections.values())

    def ballots(self, election_id: str) -> list[Ballot]:
        self.election(election_id)
        return list(self._ballots.get(election_id, ()))

    def markers(self, election_id: str) -> list[VotedMarker]:
        return [m for m in self._markers.values() if m.election_id == election_id]

    # -- lifecycle -------------------------------------------------------

    def create_election(
        self,
        name: str,
        area_codes,
        candidates: list[tuple[str, str]],
        opens_at: int,
        closes_at: int,
        actor: Role,
        now: int | None = None,
    ) -> Election:
        if not actor.at_least(Role.ADMIN):
            raise Unauthorized("election creation requires admin role")
        if len(candidates) < 2:
            raise TooFewCandidates("an election needs at least 2 candidates")
        ids = [cid for cid, _ in candidates]
        if len(set(ids)) != len(ids):
            raise ValueError("candidate ids must be unique")
        if not area_codes:
            raise ValueError("area_codes must be non-empty")
        if not opens_at < closes_at:
            raise InvalidWindow("opens_at must precede closes_at")
        now = int(time.time()) if now is None else int(now)

        election = Election(
            election_id=self._token_source().hex(),
            name=name,
            area_codes=frozenset(area_codes),
            candidates=tuple(Candidate(cid, display) for cid, display in candidates),
            opens_at=int(opens_at),
            closes_at=int(closes_at),
        )
        with self._lock:
            self._elections[election.election_id] = election
            self._ballots[election.election_id] = []
        entry = self.audit.append(
            EventType.ELECTION_CREATED,
            payload_digest({"election_id": election.election_id, "name": name}),
            now,
        )
        self._on_event(
            {
                "type": "election_created",
                "ts": now,
                "election": _election_doc(election),
                "audit": entry,
            }
        )
        return election

    def open_election(self, election_id: str, actor: Role, now: int | None = None) -> Election:
        if not actor.at_least(Role.ADMIN):
            raise Unauthorized("opening an election requires admin role")
        now = int(time.time()) if now is None else int(now)
        with self._lock:
            election = self.election(election_id)
            if election.status is not ElectionStatus.DRAFT:
                raise NotDraft(f"election is {election.status.value}, not draft")
            election.status = ElectionStatus.OPEN
        self._on_event({"type": "election_opened", "ts": now, "election_id": election_id})
        return election

    def close_election(self, election_id: str, actor: Role, now: int | None = None) -> Election:
        if not actor.at_least(Role.ADMIN):
            raise Unauthorized("closing an election requires admin role")
        now = int(time.time()) if now is None else int(now)
        with self._lock:
            election = self.election(election_id)
            if election.status is not ElectionStatus.OPEN:
                raise NotOpen(f"election is {election.status.value}, not open")
            election.status = ElectionStatus.CLOSED
        entry = self.audit.append(
            EventType.ELECTION_CLOSED,
            payload_digest({"election_id": election_id}),
            now,
        )
        self._on_event(
            {"type": "election_closed", "ts": now, "election_id": election_id, "audit": entry}
        )
        return election

    # -- eligibility and tokens -------------------------------------------

    def check_eligibility(self, voter: VoterRecord, election: Election) -> bool:
        """Registered in one of the election's areas and not voted yet."""
        if voter.area_code not in election.area_codes:
            return False
        return (voter.nic, election.election_id) not in self._markers

    def issue_qr_token(self, voter_nic: str, election_id: str, now: int | None = None) -> QrToken:
        now = int(time.time()) if now is None else int(now)
        voter = self.registry.get(voter_nic)
        election = self.election(election_id)
        if not election.is_open(now):
            raise ElectionNotOpen(f"election {election_id} is not open")
        if not self.check_eligibility(voter, election):
            raise NotEligible(f"voter {voter_nic} is not eligible for election {election_id}")

        with self._lock:
            pair = (voter.nic, election_id)
            previous = self._active_token.get(pair)
            if previous is not None:
                self._tokens[previous].superseded = True
            token = QrToken(
                token=self._token_source().hex(),
                election_id=election_id,
                voter_nic=voter.nic,
                issued_at=now,
                expires_at=now + self.qr_ttl,
            )
            self._tokens[token.token] = token
            self._active_token[pair] = token.token
        entry = self.audit.append(
            EventType.TOKEN_ISSUED,
            payload_digest({"election_id": election_id, "voter_nic": voter.nic}),
            now,
        )
        self._on_event(
            {
                "type": "token_issued",
                "audit": entry,
                "ts": now,
                "token": token.token,
                "election_id": election_id,
                "voter_nic": voter.nic,
                "issued_at": token.issued_at,
                "expires_at": token.expires_at,
                "superseded": previous,
            }
        )
        return token

    def redeem_qr_token(self, token_value: str, now: int | None = None) -> VoteCredential:
        """Atomically consume a token and hand back a voting credential.

        The credential is held in memory only; if it is lost before the
        vote is cast, eligibility is intact and a fresh token can be
        issued.
        """
        now = int(time.time()) if now is None else int(now)
        with self._lock:
            token = self._tokens.get(token_value)
            if token is None:
                raise UnknownToken("no such token")
            if token.consumed:
                raise AlreadyConsumed("token already redeemed")
            if token.superseded:
                raise StaleToken("token superseded by a newer issue")
            if now >= token.expires_at:
                raise ExpiredToken("token expired")
            token.consumed = True
            credential = VoteCredential(
                value=self._token_source().hex(),
                voter_nic=token.voter_nic,
                election_id=token.election_id,
                channel=Channel.MOBILE,
            )
            self._credentials[credential.value] = credential
        entry = self.audit.append(
            EventType.TOKEN_REDEEMED,
            payload_digest({"election_id": token.election_id, "voter_nic": token.voter_nic}),
            now,
        )
        self._on_event(
            {
                "type": "token_redeemed",
                "audit": entry,
                "ts": now,
                "token": token_value,
                "election_id": token.election_id,
                "voter_nic": token.voter_nic,
            }
        )
        return credential

    # -- voting ------------------------------------------------------------

    def _resolve_credential(
        self, credential: str, election_id: str, now: int
    ) -> tuple[str, Channel]:
        """Map a credential to (voter NIC, channel) or raise InvalidCredential."""
        qr_credential = self._credentials.get(credential)
        if qr_credential is not None:
            if qr_credential.election_id != election_id:
                raise InvalidCredential("credential bound to a different election")
            return qr_credential.voter_nic, Channel.MOBILE
        session = self.registry.session(credential, now=now)
        if session is not None:
            return session.nic, Channel.STATION
        raise InvalidCredential("credential unknown or expired")

    def cast_vote(
        self, credential: str, election_id: str, candidate_id: str, now: int | None = None
    ) -> bytes:
        now = int(time.time()) if now is None else int(now)
        election = self.election(election_id)
        if candidate_id not in election.candidate_ids():
            raise UnknownCandidate(f"candidate {candidate_id} is not in this election")
        if not election.is_open(now):
            raise ElectionNotOpen(f"election {election_id} is not open")
        nic, channel = self._resolve_credential(credential, election_id, now)
        voter = self.registry.get(nic)
        if voter.area_code not in election.area_codes:
            raise NotEligible(f"voter area {voter.area_code} is outside this election")

        with self._lock:
            pair = (nic, election_id)
            if pair in self._markers:
                raise AlreadyVoted("voter already cast a ballot in this election")
            marker = VotedMarker(
                voter_nic=nic, election_id=election_id, channel=channel, marked_at=now
            )
            ballot_id = self._token_source().hex()
            receipt = hashlib.sha256(bytes.fromhex(ballot_id) + self.receipt_salt).digest()
            ballot = Ballot(
                ballot_id=ballot_id,
                election_id=election_id,
                candidate_id=candidate_id,
                area_code=voter.area_code,
                cast_minute=now - now % 60,
                channel=channel,
                receipt=receipt,
            )
            self._markers[pair] = marker
            self._ballots[election_id].append(ballot)
        entry = self.audit.append(
            EventType.VOTE_CAST,
            payload_digest({"election_id": election_id, "ballot_id": ballot.ballot_id}),
            now,
        )
        self._on_event(
            {
                "type": "vote_cast",
                "audit": entry,
                "ts": now,
                "marker": {
                    "voter_nic": nic,
                    "election_id": election_id,
                    "channel": channel.value,
                    "marked_at": now,
                },
                "ballot": _ballot_doc(ballot),
            }
        )
        return receipt

    # -- tally ---------------------------------------------------------------

    def tally(self, election_id: str, as_of: int | None = None) -> TallySnapshot:
        """Aggregate ballots with cast_minute <= as_of; pure read."""
        as_of = int(time.time()) if as_of is None else int(as_of)
        election = self.election(election_id)
        counts = {cid: 0 for cid in election.candidate_ids()}
        per_area = {
            (area, cid): 0 for area in sorted(election.area_codes) for cid in election.candidate_ids()
        }
        total = 0
        for ballot in self._ballots.get(election_id, ()):
            if ballot.cast_minute <= as_of:
                counts[ballot.candidate_id] += 1
                per_area[(ballot.area_code, ballot.candidate_id)] += 1
                total += 1
        return TallySnapshot(
            election_id=election_id,
            as_of=as_of,
            counts=counts,
            per_area_counts=per_area,
            total=total,
        )

    # -- snapshots --------------------------------------------------------------

    def dump_state(self) -> dict:
        """Everything needed to rebuild election state (no credentials)."""
        return {
            "elections": [_election_doc(e) for e in self._elections.values()],
            "tokens": [
                {
                    "token": t.token,
                    "election_id": t.election_id,
                    "voter_nic": t.voter_nic,
                    "issued_at": t.issued_at,
                    "expires_at": t.expires_at,
                    "consumed": t.consumed,
                    "superseded": t.superseded,
                }
                for t in self._tokens.values()
            ],
            "markers": [
                {
                    "voter_nic": m.voter_nic,
                    "election_id": m.election_id,
                    "channel": m.channel.value,
                    "marked_at": m.marked_at,
                }
                for m in self._markers.values()
            ],
            "ballots": [_ballot_doc(b) for bs in self._ballots.values() for b in bs],
        }

    def restore_state(self, doc: dict) -> None:
        for election_doc in doc.get("elections", []):
            self.restore_election(election_doc)
        for token_doc in doc.get("tokens", []):
            token = QrToken(
                token=token_doc["token"],
                election_id=token_doc["election_id"],
                voter_nic=token_doc["voter_nic"],
                issued_at=token_doc["issued_at"],
                expires_at=token_doc["expires_at"],
                consumed=token_doc["consumed"],
                superseded=token_doc["superseded"],
            )
            self._tokens[token.token] = token
            if not token.consumed and not token.superseded:
                self._active_token[(token.voter_nic, token.election_id)] = token.token
        for marker_doc in doc.get("markers", []):
            self.restore_marker(marker_doc)
        for ballot_doc in doc.get("ballots", []):
            self.restore_ballot(ballot_doc)

    # -- journal replay -------------------------------------------------------

    def restore_election(self, doc: dict) -> None:
        election = Election(
            election_id=doc["election_id"],
            name=doc["name"],
            area_codes=frozenset(doc["area_codes"]),
            candidates=tuple(Candidate(c["candidate_id"], c["display_name"]) for c in doc["candidates"]),
            opens_at=doc["opens_at"],
            closes_at=doc["closes_at"],
            status=ElectionStatus(doc["status"]),
        )
        self._elections[election.election_id] = election
        self._ballots.setdefault(election.election_id, [])

    def restore_status(self, election_id: str, status: ElectionStatus) -> None:
        self._elections[election_id].status = status

    def restore_token(
        self, token: str, election_id: str, voter_nic: str, issued_at: int, expires_at: int
    ) -> None:
        restored = QrToken(
            token=token,
            election_id=election_id,
            voter_nic=voter_nic,
            issued_at=issued_at,
            expires_at=expires_at,
        )
        self._tokens[token] = restored
        self._active_token[(voter_nic, election_id)] = token

    def mark_token_redeemed(self, token_value: str) -> None:
        token = self._tokens.get(token_value)
        if token is not None:
            token.consumed = True

    def mark_token_superseded(self, token_value: str) -> None:
        token = self._tokens.get(token_value)
        if token is not None:
            token.superseded = True

    def restore_marker(self, marker_doc: dict) -> None:
        marker = VotedMarker(
            voter_nic=marker_doc["voter_nic"],
            election_id=marker_doc["election_id"],
            channel=Channel(marker_doc["channel"]),
            marked_at=marker_doc["marked_at"],
        )
        self._markers[(marker.voter_nic, marker.election_id)] = marker

    def restore_ballot(self, ballot_doc: dict) -> None:
        ballot = Ballot(
            ballot_id=ballot_doc["ballot_id"],
            election_id=ballot_doc["election_id"],
            candidate_id=ballot_doc["candidate_id"],
            area_code=ballot_doc["area_code"],
            cast_minute=ballot_doc["cast_minute"],
            channel=Channel(ballot_doc["channel"]),
            receipt=bytes.fromhex(ballot_doc["receipt"]),
        )
        existing = self._ballots.setdefault(ballot.election_id, [])
        # snapshot + journal replay may deliver the same ballot twice
        if any(b.ballot_id == ballot.ballot_id for b in existing):
            return
        existing.append(ballot)

    def restore_vote(self, marker_doc: dict, ballot_doc: dict) -> None:
        self.restore_marker(marker_doc)
        self.restore_ballot(ballot_doc)


def _election_doc(election: Election) -> dict:
    return {
        "election_id": election.election_id,
        "name": election.name,
        "area_codes": sorted(election.area_codes),
        "candidates": [
            {"candidate_id": c.candidate_id, "display_name": c.display_name}
            for c in election.candidates
        ],
        "opens_at": election.opens_at,
        "closes_at": election.closes_at,
        "status": election.status.value,
    }


def _ballot_doc(ballot: Ballot) -> dict:
    return {
        "ballot_id": ballot.ballot_id,
        "election_id": ballot.election_id,
        "candidate_id": ballot.candidate_id,
        "area_code": ballot.area_code,
        "cast_minute": ballot.cast_minute,
        "channel": ballot.channel.value,
        "receipt": ballot.receipt.hex(),
    }
