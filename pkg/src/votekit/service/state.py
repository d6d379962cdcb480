"""Application state: wires registry, elections, audit chain, models and
the journal into one recoverable unit.

Every mutating core operation emits a replayable event; the journal
persists it (fsync) before the caller sees a result, so an acknowledged
action survives a crash.  Replay restores state and the audit chain
verbatim from the stored documents; chain hashes are never recomputed at
load time, which is what makes post-hoc journal edits detectable by
``verify``.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass

from ..audit import AuditLog, entry_from_doc, entry_to_doc, verify_chain
from ..elections import ElectionService, ElectionStatus
from ..forest import Forest, load_model
from ..projection import Projection, TurnoutCurve, build_curves_from_history, project
from ..registry import Registry, record_from_doc
from ..roles import Role
from ..turnout import (
    TurnoutPrediction,
    generate_training_data,
    predict_turnout,
    train_turnout_model,
)
from ..violence import (
    RiskReport,
    generate_history,
    rank_areas,
    read_history_csv,
    train_violence_model,
)
from ..weather import WeatherGateway
from .config import ServiceConfig
from .journal import Journal

DEFAULT_LINEAR_CURVE_POINTS = ((0.0, 0.0), (1.0, 1.0))


@dataclass(frozen=True)
class AuthzDecision:
    allowed: bool
    role: Role | None
    nic: str | None
    reason: str


class AppState:
    def __init__(self, config: ServiceConfig, token_source=None, clock=None):
        self.config = config
        self.clock = clock
        self.journal = Journal(config.data_dir)
        self._events_since_snapshot = 0
        self._model_lock = threading.Lock()
        self._turnout_model: Forest | None = None
        self._violence = None  # (model, history rows)
        self._curves: dict[str, TurnoutCurve] | None = None
        self.gateway = WeatherGateway(config.weather) if config.weather else None

        snapshot, events = self.journal.load()
        salt = None
        if snapshot is not None:
            salt = bytes.fromhex(snapshot["receipt_salt"])
        else:
            for event in events:
                if event["type"] == "meta":
                    salt = bytes.fromhex(event["receipt_salt"])
                    break
        fresh_start = salt is None
        if fresh_start:
            salt = secrets.token_bytes(32)

        self.audit = AuditLog()
        self.registry = Registry(
            self.audit,
            session_ttl=config.session_ttl,
            token_source=token_source,
            on_event=self._record_event,
        )
        self.elections = ElectionService(
            self.registry,
            self.audit,
            qr_ttl=config.qr_ttl,
            token_source=token_source,
            receipt_salt=salt,
            on_event=self._record_event,
        )

        self._replaying = True
        try:
            entries = []
            if snapshot is not None:
                self.registry_restore(snapshot)
                self.elections.restore_state(snapshot)
                entries.extend(entry_from_doc(doc) for doc in snapshot["audit_entries"])
            entries.extend(self._apply_events(events))
            # snapshot and journal segments may overlap; keep one entry per index
            unique = {entry.index: entry for entry in entries}
            self.audit.restore([unique[i] for i in sorted(unique)])
        finally:
            self._replaying = False
        if fresh_start:
            self._record_event({"type": "meta", "receipt_salt": salt.hex()})

    # -- persistence -----------------------------------------------------------

    def _record_event(self, event: dict) -> None:
        if self._replaying:
            return
        doc = dict(event)
        if "audit" in doc:
            doc["audit"] = entry_to_doc(doc["audit"])
        self.journal.append(doc)
        self._events_since_snapshot += 1
        if self._events_since_snapshot >= self.config.snapshot_every:
            self.write_snapshot()

    def registry_restore(self, snapshot: dict) -> None:
        for record_doc in snapshot["voters"]:
            self.registry.restore(record_from_doc(record_doc))

    def _apply_events(self, events: list[dict]):
        """Replay journal events; returns the audit entries they carry."""
        entries = []
        for event in events:
            kind = event["type"]
            if kind == "meta":
                pass
            elif kind == "voter_enrolled":
                self.registry.restore(record_from_doc(event["record"]))
            elif kind == "auth_attempt":
                pass  # sessions are ephemeral; only the audit entry matters
            elif kind == "election_created":
                self.elections.restore_election(event["election"])
            elif kind == "election_opened":
                self.elections.restore_status(event["election_id"], ElectionStatus.OPEN)
            elif kind == "election_closed":
                self.elections.restore_status(event["election_id"], ElectionStatus.CLOSED)
            elif kind == "token_issued":
                if event.get("superseded"):
                    self.elections.mark_token_superseded(event["superseded"])
                self.elections.restore_token(
                    event["token"],
                    event["election_id"],
                    event["voter_nic"],
                    event["issued_at"],
                    event["expires_at"],
                )
            elif kind == "token_redeemed":
                self.elections.mark_token_redeemed(event["token"])
            elif kind == "vote_cast":
                self.elections.restore_vote(event["marker"], event["ballot"])
            else:
                raise ValueError(f"unknown journal event type {kind!r}")
            if "audit" in event:
                entries.append(entry_from_doc(event["audit"]))
        return entries

    def write_snapshot(self) -> None:
        from ..registry import record_to_doc

        doc = {
            "receipt_salt": self.elections.receipt_salt.hex(),
            "voters": [record_to_doc(r) for r in self.registry.records()],
            "audit_entries": [entry_to_doc(e) for e in self.audit.entries()],
        }
        doc.update(self.elections.dump_state())
        self.journal.write_snapshot(doc)
        self._events_since_snapshot = 0

    # -- authorization -----------------------------------------------------------

    def authorize(self, session_token: str | None, required: Role, now=None) -> AuthzDecision:
        """Decision object, never an exception: allow iff the token is live
        and its role ranks at or above the required role."""
        if not session_token:
            return AuthzDecision(False, None, None, "missing token")
        if self.config.bootstrap_token and session_token == self.config.bootstrap_token:
            return AuthzDecision(True, Role.SUPER_ADMIN, None, "bootstrap")
        session = self.registry.session(session_token, now=now)
        if session is None:
            return AuthzDecision(False, None, None, "expired")
        role = self.config.role_for(session.nic)
        if not role.at_least(required):
            return AuthzDecision(False, role, session.nic, f"requires {required.value}")
        return AuthzDecision(True, role, session.nic, "ok")

    # -- prediction models ---------------------------------------------------------

    def turnout_model(self) -> Forest:
        with self._model_lock:
            if self._turnout_model is None:
                if self.config.turnout_model_path:
                    self._turnout_model = load_model(self.config.turnout_model_path)
                else:
                    samples = generate_training_data(500, seed=self.config.seed)
                    self._turnout_model = train_turnout_model(
                        samples, forest_params=self.config.model_params
                    ).model
            return self._turnout_model

    def predict_turnout_at(self, lat: float, lon: float, registered: int) -> TurnoutPrediction:
        if self.gateway is None:
            raise ValueError("weather gateway is not configured")
        observation = self.gateway.fetch_current(lat, lon)
        return predict_turnout(self.turnout_model(), observation, registered)

    def violence_reports(self) -> list[RiskReport]:
        with self._model_lock:
            if self._violence is None:
                if self.config.violence_history_csv:
                    history = read_history_csv(self.config.violence_history_csv)
                else:
                    history = generate_history(200, seed=self.config.seed)
                if self.config.violence_model_path:
                    model = load_model(self.config.violence_model_path)
                else:
                    model = train_violence_model(
                        history, forest_params=self.config.model_params
                    ).model
                self._violence = (model, history)
        model, history = self._violence
        return rank_areas(model, history)

    # -- projection ------------------------------------------------------------------

    def curves(self) -> dict[str, TurnoutCurve] | None:
        """Configured historical curves, or None meaning 'default linear'."""
        if self._curves is None and self.config.attendance_history_csv:
            import csv

            with open(self.config.attendance_history_csv, newline="") as fh:
                reader = csv.DictReader(fh)
                rows = [
                    (r["area_code"], float(r["time_fraction"]), float(r["cumulative_fraction"]))
                    for r in reader
                ]
            self._curves = build_curves_from_history(rows)
        return self._curves

    def project_election(self, election_id: str, t: float, as_of: int | None = None) -> Projection:
        election = self.elections.election(election_id)
        snapshot = self.elections.tally(election_id, as_of=as_of)
        curves = self.curves()
        if curves is None:
            # no history configured: every area follows a uniform linear curve
            curves = {
                area: TurnoutCurve(area_code=area, points=DEFAULT_LINEAR_CURVE_POINTS)
                for area in election.area_codes
            }
        return project(snapshot, curves, t, election.candidate_ids())

    # -- audit -----------------------------------------------------------------------

    def verify_audit(self) -> dict:
        valid, first_bad = verify_chain(self.audit.entries())
        return {"valid": valid, "first_bad_index": first_bad, "entries": len(self.audit)}

    def close(self) -> None:
        self.journal.close()
