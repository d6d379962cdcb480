"""HTTP facade: every endpoint dispatches 1:1 to a module operation.

Domain errors map to status codes in one table (validation 400, auth
401/403, lookups 404, conflicts 409); all responses are JSON.  Capture
payloads arrive base64-encoded; biometric templates never leave the
service, only scores and booleans do.
"""

from __future__ import annotations

import base64
import binascii
import time

from fastapi import FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .. import errors
from ..biometrics import BiometricCapture, CaptureKind
from ..elections import parse_qr_payload
from ..roles import Role
from .state import AppState

_STATUS_BY_CODE = {
    # validation
    "empty_capture": 400,
    "kind_mismatch": 400,
    "invalid_nic_format": 400,
    "too_few_candidates": 400,
    "invalid_window": 400,
    "out_of_range": 400,
    "unknown_candidate": 400,
    "malformed_curve": 400,
    "missing_curve": 400,
    "empty_tally": 400,
    "too_few_points": 400,
    # auth
    "invalid_credential": 401,
    "unauthorized": 403,
    "not_eligible": 403,
    # lookups
    "unknown_nic": 404,
    "unknown_election": 404,
    "unknown_token": 404,
    # conflicts
    "duplicate_nic": 409,
    "already_voted": 409,
    "already_consumed": 409,
    "stale_token": 409,
    "expired_token": 409,
    "election_not_open": 409,
    "not_open": 409,
    "not_draft": 409,
}


class EnrollRequest(BaseModel):
    nic: str
    full_name: str
    area_code: str
    fingerprint_b64: str
    face_b64: str


class AuthRequest(BaseModel):
    nic: str
    fingerprint_b64: str
    face_b64: str


class CandidateSpec(BaseModel):
    candidate_id: str
    display_name: str


class CreateElectionRequest(BaseModel):
    name: str
    area_codes: list[str]
    candidates: list[CandidateSpec]
    opens_at: int
    closes_at: int


class IssueTokenRequest(BaseModel):
    voter_nic: str


class RedeemRequest(BaseModel):
    payload: str = Field(description="QR payload: evote://v1/<election>/<token>")


class CastRequest(BaseModel):
    credential: str
    candidate_id: str


def _decode_capture(b64: str, kind: CaptureKind) -> BiometricCapture:
    try:
        payload = base64.b64decode(b64, validate=True)
    except (binascii.Error, ValueError):
        raise errors.EmptyCapture("capture payload is not valid base64") from None
    return BiometricCapture(kind=kind, payload=payload)


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="votekit", version="0.1.0")
    app.state.votekit = state

    def now() -> int:
        return int(state.clock() if state.clock else time.time())

    @app.exception_handler(errors.VotekitError)
    async def _domain_error(request: Request, exc: errors.VotekitError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"error": exc.code, "detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": "validation", "detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _request_validation(request: Request, exc: RequestValidationError):
        # all validation failures are 400s in this API, not FastAPI's 422
        return JSONResponse(
            status_code=400, content={"error": "validation", "detail": exc.errors()}
        )

    def require(required: Role, authorization: str | None):
        token = None
        if authorization and authorization.startswith("Bearer "):
            token = authorization.removeprefix("Bearer ")
        decision = state.authorize(token, required, now=now())
        if not decision.allowed:
            status = 401 if decision.reason in ("missing token", "expired") else 403
            raise _HttpAuthError(status, decision.reason)
        return decision

    class _HttpAuthError(Exception):
        def __init__(self, status: int, reason: str):
            self.status = status
            self.reason = reason

    @app.exception_handler(_HttpAuthError)
    async def _auth_error(request: Request, exc: _HttpAuthError):
        return JSONResponse(
            status_code=exc.status, content={"error": "unauthorized", "detail": exc.reason}
        )

    # -- identity ------------------------------------------------------------

    @app.post("/api/voters", status_code=201)
    def enroll_voter(body: EnrollRequest, authorization: str | None = Header(default=None)):
        decision = require(Role.OFFICER, authorization)
        record = state.registry.enroll(
            nic=body.nic,
            full_name=body.full_name,
            area_code=body.area_code,
            fp_capture=_decode_capture(body.fingerprint_b64, CaptureKind.FINGERPRINT),
            face_capture=_decode_capture(body.face_b64, CaptureKind.FACE),
            officer=decision.nic or "bootstrap",
            now=now(),
        )
        return {
            "nic": record.nic,
            "full_name": record.full_name,
            "area_code": record.area_code,
            "composite_id": record.composite_id.hex,
            "enrolled_at": record.enrolled_at,
        }

    @app.post("/api/auth/biometric")
    def authenticate(body: AuthRequest):
        result = state.registry.authenticate(
            nic=body.nic,
            fp_capture=_decode_capture(body.fingerprint_b64, CaptureKind.FINGERPRINT),
            face_capture=_decode_capture(body.face_b64, CaptureKind.FACE),
            now=now(),
        )
        doc = {
            "accepted": result.accepted,
            "fingerprint_score": result.fingerprint_score,
            "face_score": result.face_score,
        }
        if result.accepted:
            doc["session_token"] = result.session_token
            doc["role"] = state.config.role_for(body.nic.strip().upper()).value
        return doc

    # -- elections ------------------------------------------------------------

    @app.post("/api/elections", status_code=201)
    def create_election(
        body: CreateElectionRequest, authorization: str | None = Header(default=None)
    ):
        decision = require(Role.ADMIN, authorization)
        election = state.elections.create_election(
            name=body.name,
            area_codes=body.area_codes,
            candidates=[(c.candidate_id, c.display_name) for c in body.candidates],
            opens_at=body.opens_at,
            closes_at=body.closes_at,
            actor=decision.role,
            now=now(),
        )
        return _election_summary(election)

    @app.post("/api/elections/{election_id}/open")
    def open_election(election_id: str, authorization: str | None = Header(default=None)):
        decision = require(Role.ADMIN, authorization)
        return _election_summary(
            state.elections.open_election(election_id, decision.role, now=now())
        )

    @app.post("/api/elections/{election_id}/close")
    def close_election(election_id: str, authorization: str | None = Header(default=None)):
        decision = require(Role.ADMIN, authorization)
        return _election_summary(
            state.elections.close_election(election_id, decision.role, now=now())
        )

    @app.post("/api/elections/{election_id}/qr-tokens", status_code=201)
    def issue_token(
        election_id: str,
        body: IssueTokenRequest,
        authorization: str | None = Header(default=None),
    ):
        require(Role.OFFICER, authorization)
        token = state.elections.issue_qr_token(body.voter_nic, election_id, now=now())
        return {
            "qr_payload": token.qr_payload(),
            "election_id": token.election_id,
            "expires_at": token.expires_at,
        }

    @app.post("/api/qr/redeem")
    def redeem(body: RedeemRequest):
        election_id, token_value = parse_qr_payload(body.payload)
        credential = state.elections.redeem_qr_token(token_value, now=now())
        if credential.election_id != election_id:
            raise errors.UnknownToken("payload election does not match token")
        return {"credential": credential.value, "election_id": credential.election_id}

    @app.post("/api/elections/{election_id}/votes", status_code=201)
    def cast_vote(election_id: str, body: CastRequest):
        receipt = state.elections.cast_vote(
            body.credential, election_id, body.candidate_id, now=now()
        )
        return {"receipt": receipt.hex()}

    @app.get("/api/elections/{election_id}/tally")
    def tally(election_id: str):
        return state.elections.tally(election_id, as_of=now()).as_document()

    @app.get("/api/elections/{election_id}/projection")
    def projection(election_id: str, t: float = Query(gt=0.0, le=1.0)):
        return state.project_election(election_id, t).as_document()

    # -- predictions -----------------------------------------------------------

    @app.get("/api/predictions/turnout")
    def turnout(
        lat: float = Query(ge=-90.0, le=90.0),
        lon: float = Query(ge=-180.0, le=180.0),
        registered: int = Query(ge=1),
    ):
        prediction = state.predict_turnout_at(lat, lon, registered)
        return {
            "predicted_turnout_pct": prediction.predicted_turnout_pct,
            "predicted_participants": prediction.predicted_participants,
            "features_used": dict(zip(
                ["visibility_km", "humidity_pct", "temperature_c", "wind_speed_ms", "cloudiness_pct"],
                prediction.features_used,
            )),
            "model_id": prediction.model_id,
        }

    @app.get("/api/predictions/violence")
    def violence(authorization: str | None = Header(default=None)):
        require(Role.ADMIN, authorization)
        return {
            "areas": [
                {
                    "area_code": report.area_code,
                    "probability": report.probability,
                    "tier": report.tier,
                    "model_id": report.model_id,
                }
                for report in state.violence_reports()
            ]
        }

    # -- audit -------------------------------------------------------------------

    @app.get("/api/audit/verify")
    def verify(authorization: str | None = Header(default=None)):
        require(Role.ADMIN, authorization)
        return state.verify_audit()

    @app.get("/api/healthz")
    def healthz():
        weather = state.gateway.healthcheck() if state.gateway else {"ok": False, "detail": "unconfigured"}
        return {"ok": True, "weather": weather, "audit_entries": len(state.audit)}

    return app


def _election_summary(election) -> dict:
    return {
        "election_id": election.election_id,
        "name": election.name,
        "status": election.status.value,
        "area_codes": sorted(election.area_codes),
        "candidates": [
            {"candidate_id": c.candidate_id, "display_name": c.display_name}
            for c in election.candidates
        ],
        "opens_at": election.opens_at,
        "closes_at": election.closes_at,
    }
