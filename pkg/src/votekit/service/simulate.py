"""Deterministic end-to-end election-day simulation.

Drives the real service stack (registry, tokens, votes, journal, audit
chain) with a virtual clock over one simulated day: enrolls voters,
opens an election, casts station and mobile votes spread across the day,
prints a projection trace at quarter points, closes, and verifies the
chain.  Everything is derived from one seed, so two runs produce
identical tallies.
"""

from __future__ import annotations

import hashlib
import tempfile
from dataclasses import dataclass

from ..biometrics import BiometricCapture, CaptureKind
from ..rng import SplitMix64
from ..roles import Role
from .config import ServiceConfig
from .state import AppState

DAY_SECONDS = 86_400
SIM_DAY_START = 1_700_000_000  # fixed virtual epoch so runs are comparable

CANDIDATES = [
    ("CAND-A", "Alice Fonseka"),
    ("CAND-B", "Bandu Perera"),
    ("CAND-C", "Chandra Silva"),
]

TURNOUT_RATE = 0.85
MOBILE_RATE = 0.30


@dataclass
class SimulationReport:
    election_id: str
    final_counts: dict[str, int]
    total_votes: int
    chain_valid: bool
    audit_entries: int
    trace: list[dict]


def _capture(nic: str, kind: CaptureKind) -> BiometricCapture:
    # reproducible stand-in sensor payload, unique per (voter, modality)
    seed = hashlib.sha256(f"{nic}:{kind.value}".encode()).digest()
    return BiometricCapture(kind=kind, payload=seed * 8)


def run_simulation(
    voters: int,
    areas: int,
    seed: int,
    data_dir: str | None = None,
    emit=print,
) -> SimulationReport:
    if voters < 1 or areas < 1:
        raise ValueError("voters and areas must be positive")
    rng = SplitMix64(seed)
    token_source = lambda: rng.token_bytes(16)  # noqa: E731

    with tempfile.TemporaryDirectory(prefix="votekit-sim-") as tmp:
        config = ServiceConfig(data_dir=data_dir or tmp, seed=seed)
        state = AppState(config, token_source=token_source)
        try:
            return _run(state, voters, areas, rng, emit)
        finally:
            state.close()


def _run(state: AppState, voters: int, areas: int, rng: SplitMix64, emit) -> SimulationReport:
    day_start = SIM_DAY_START
    day_end = day_start + DAY_SECONDS
    area_codes = [f"AREA-{i + 1:02d}" for i in range(areas)]

    emit(f"enrolling {voters} voters across {areas} areas")
    nics = []
    for i in range(voters):
        nic = f"{900000000 + i}V"
        state.registry.enroll(
            nic=nic,
            full_name=f"Voter {i:04d}",
            area_code=area_codes[i % areas],
            fp_capture=_capture(nic, CaptureKind.FINGERPRINT),
            face_capture=_capture(nic, CaptureKind.FACE),
            officer="SIM-OFFICER",
            now=day_start - 7 * DAY_SECONDS,
        )
        nics.append(nic)

    election = state.elections.create_election(
        name="Simulated general election",
        area_codes=area_codes,
        candidates=CANDIDATES,
        opens_at=day_start,
        closes_at=day_end,
        actor=Role.ADMIN,
        now=day_start - DAY_SECONDS,
    )
    state.elections.open_election(election.election_id, Role.ADMIN, now=day_start - DAY_SECONDS)
    emit(f"election {election.election_id} open for {day_start}..{day_end}")

    # plan the day: who votes, when, how, and for whom
    plan = []
    for i, nic in enumerate(nics):
        if rng.random() >= TURNOUT_RATE:
            continue
        cast_at = day_start + int(rng.random() * (DAY_SECONDS - 60))
        mobile = rng.random() < MOBILE_RATE
        lean = i % areas % len(CANDIDATES)  # area-correlated preference
        roll = rng.random()
        choice = CANDIDATES[lean][0] if roll < 0.5 else CANDIDATES[int(roll * 100) % 3][0]
        plan.append((cast_at, nic, mobile, choice))
    plan.sort()

    emit(f"casting {len(plan)} votes (about {MOBILE_RATE:.0%} mobile)")
    for cast_at, nic, mobile, choice in plan:
        if mobile:
            token = state.elections.issue_qr_token(nic, election.election_id, now=cast_at)
            credential = state.elections.redeem_qr_token(token.token, now=cast_at).value
        else:
            decision = state.registry.authenticate(
                nic, _capture(nic, CaptureKind.FINGERPRINT), _capture(nic, CaptureKind.FACE),
                now=cast_at,
            )
            credential = decision.session_token
        state.elections.cast_vote(credential, election.election_id, choice, now=cast_at)

    trace = []
    for fraction in (0.25, 0.5, 0.75):
        as_of = day_start + int(fraction * DAY_SECONDS)
        snapshot = state.elections.tally(election.election_id, as_of=as_of)
        if snapshot.total == 0:
            emit(f"t={fraction:.2f}: no votes counted yet")
            continue
        projection = state.project_election(election.election_id, fraction, as_of=as_of)
        trace.append(
            {
                "t": fraction,
                "counted": snapshot.total,
                "projected_total": round(projection.projected_total, 1),
                "leader": projection.leader,
                "win_probability": round(projection.win_probability, 4),
            }
        )
        emit(
            f"t={fraction:.2f}: counted {snapshot.total:5d}  projected total "
            f"{projection.projected_total:8.1f}  leader {projection.leader} "
            f"(win prob {projection.win_probability:.3f})"
        )

    state.elections.close_election(election.election_id, Role.ADMIN, now=day_end)
    final = state.elections.tally(election.election_id, as_of=day_end)
    verification = state.verify_audit()

    emit("final tally:")
    for candidate_id in sorted(final.counts):
        emit(f"  {candidate_id}: {final.counts[candidate_id]}")
    emit(f"total votes: {final.total}")
    status = "valid" if verification["valid"] else f"INVALID at {verification['first_bad_index']}"
    emit(f"audit chain {status} ({verification['entries']} entries)")

    return SimulationReport(
        election_id=election.election_id,
        final_counts=dict(final.counts),
        total_votes=final.total,
        chain_valid=verification["valid"],
        audit_entries=verification["entries"],
        trace=trace,
    )
