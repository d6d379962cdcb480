import numpy as np
import pytest

from votekit.audit import AuditLog
from votekit.biometrics import BiometricCapture, CaptureKind
from votekit.elections import ElectionService
from votekit.registry import Registry
from votekit.roles import Role
from votekit.rng import SplitMix64

DAY = 86_400
T0 = 1_700_000_000


def fingerprint(payload: bytes) -> BiometricCapture:
    return BiometricCapture(kind=CaptureKind.FINGERPRINT, payload=payload)


def face(payload: bytes) -> BiometricCapture:
    return BiometricCapture(kind=CaptureKind.FACE, payload=payload)


def captures_for(nic: str) -> tuple[BiometricCapture, BiometricCapture]:
    return fingerprint(f"fp::{nic}".encode() * 9), face(f"face::{nic}".encode() * 9)


@pytest.fixture
def audit_log():
    return AuditLog()


@pytest.fixture
def registry(audit_log):
    return Registry(audit_log)


@pytest.fixture
def service(registry, audit_log):
    return ElectionService(registry, audit_log)


def enroll(registry: Registry, nic: str, area: str = "COL-05") -> None:
    fp, fc = captures_for(nic)
    registry.enroll(nic, f"Voter {nic}", area, fp, fc, officer="OFF-1", now=T0 - DAY)


def make_election(service: ElectionService, areas=("COL-05",), n_candidates=2, open_it=True):
    candidates = [(f"C{i}", f"Candidate {i}") for i in range(n_candidates)]
    election = service.create_election(
        name="Test election",
        area_codes=list(areas),
        candidates=candidates,
        opens_at=T0,
        closes_at=T0 + DAY,
        actor=Role.ADMIN,
        now=T0 - 3600,
    )
    if open_it:
        service.open_election(election.election_id, Role.ADMIN, now=T0 - 3600)
    return election


def deterministic_rng_source(seed: int):
    rng = SplitMix64(seed)
    return lambda: rng.token_bytes(16)


def toy_regression_rows(seed: int, n: int, p: int, low=-50, high=50):
    """Integer-valued rows so split arithmetic is exact (see tree docs)."""
    rng = SplitMix64(seed)
    X = np.array([[rng.randint(0, 20) for _ in range(p)] for _ in range(n)], dtype=float)
    y = np.array([rng.randint(low, high) for _ in range(n)], dtype=float)
    return X, y


def toy_classification_rows(seed: int, n: int, p: int, n_classes: int = 3):
    rng = SplitMix64(seed)
    X = np.array([[rng.randint(0, 20) for _ in range(p)] for _ in range(n)], dtype=float)
    y = np.array([rng.randint(0, n_classes - 1) for _ in range(n)])
    return X, y
