"""A complete miniature election: eligibility, QR tokens, secret ballots.

Three voters in two areas; one votes at a station with a biometric
session, two vote on mobile with one-time QR tokens.  The tally never
sees voter identities - only anonymous ballots.
"""

from votekit.audit import AuditLog, verify_chain
from votekit.biometrics import BiometricCapture, CaptureKind
from votekit.elections import ElectionService
from votekit.registry import Registry
from votekit.roles import Role

T0 = 1_700_000_000

audit = AuditLog()
registry = Registry(audit)
service = ElectionService(registry, audit)


def capture(nic, kind):
    return BiometricCapture(kind=kind, payload=f"{kind.value}:{nic}".encode() * 10)


voters = [("901111111V", "COL-05"), ("902222222V", "COL-05"), ("903333333V", "COL-06")]
for nic, area in voters:
    registry.enroll(nic, f"Voter {nic[:4]}", area,
                    capture(nic, CaptureKind.FINGERPRINT), capture(nic, CaptureKind.FACE),
                    officer="GS-01", now=T0 - 86400)
print(f"enrolled {len(registry)} voters")

election = service.create_election(
    name="Local council 2026",
    area_codes=["COL-05", "COL-06"],
    candidates=[("LOTUS", "Lotus Party"), ("STAR", "Star Party")],
    opens_at=T0,
    closes_at=T0 + 86400,
    actor=Role.ADMIN,
    now=T0 - 3600,
)
service.open_election(election.election_id, Role.ADMIN, now=T0 - 60)
print(f"election {election.election_id[:12]}... open, areas {sorted(election.area_codes)}")

# station vote: authenticate, then cast with the session token
nic = "901111111V"
session = registry.authenticate(
    nic, capture(nic, CaptureKind.FINGERPRINT), capture(nic, CaptureKind.FACE), now=T0 + 600
).session_token
receipt = service.cast_vote(session, election.election_id, "LOTUS", now=T0 + 620)
print(f"\nstation vote cast, receipt {receipt.hex()[:16]}...")

# mobile votes: one-time QR token per voter
for nic, choice in [("902222222V", "STAR"), ("903333333V", "LOTUS")]:
    token = service.issue_qr_token(nic, election.election_id, now=T0 + 7200)
    print(f"QR payload for {nic}: {token.qr_payload()[:40]}...")
    credential = service.redeem_qr_token(token.token, now=T0 + 7230)
    service.cast_vote(credential.value, election.election_id, choice, now=T0 + 7260)

# double voting is blocked by the participation marker, not the ballot
try:
    service.cast_vote(session, election.election_id, "STAR", now=T0 + 8000)
except Exception as error:
    print(f"\nsecond vote by the station voter -> {type(error).__name__}")

snapshot = service.tally(election.election_id, as_of=T0 + 86400)
print(f"\ntally: {snapshot.counts} (total {snapshot.total})")
for (area, cid), votes in sorted(snapshot.per_area_counts.items()):
    if votes:
        print(f"  {area} {cid}: {votes}")

service.close_election(election.election_id, Role.ADMIN, now=T0 + 86400)
valid, _ = verify_chain(audit.entries())
print(f"\nelection closed; audit chain valid={valid} with {len(audit)} entries")
