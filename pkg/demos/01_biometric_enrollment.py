"""Enrolling a voter and authenticating with biometric captures.

Walks the identity pipeline: raw capture payloads are folded into 512-bit
templates, combined with the NIC into a composite ID, and matched by
normalized Hamming similarity with a 0.90 per-modality threshold.
"""

from votekit.audit import AuditLog
from votekit.biometrics import (
    BiometricCapture,
    CaptureKind,
    extract_template,
    similarity,
)
from votekit.registry import Registry

fp_payload = b"ridge-pattern-sample-voter-7" * 12   # stands in for sensor bytes
face_payload = b"face-image-sample-voter-7" * 12

fp_capture = BiometricCapture(kind=CaptureKind.FINGERPRINT, payload=fp_payload)
face_capture = BiometricCapture(kind=CaptureKind.FACE, payload=face_payload)

template = extract_template(fp_capture)
print(f"fingerprint template: {len(template.bits) * 8} bits, first bytes {template.bits[:8].hex()}")

# one flipped payload byte scrambles about half the template bits
noisy = bytearray(fp_payload)
noisy[3] ^= 0x10
noisy_template = extract_template(
    BiometricCapture(kind=CaptureKind.FINGERPRINT, payload=bytes(noisy))
)
print(f"similarity after 1-byte payload change: {similarity(template, noisy_template):.3f}")
print(f"similarity with itself:                  {similarity(template, template):.3f}")

audit = AuditLog()
registry = Registry(audit)
record = registry.enroll(
    nic="901234567V",
    full_name="Nimal Perera",
    area_code="COL-05",
    fp_capture=fp_capture,
    face_capture=face_capture,
    officer="GS-OFFICER-12",
)
print(f"\nenrolled {record.nic} in {record.area_code}")
print(f"composite id: {record.composite_id.hex}")

decision = registry.authenticate("901234567V", fp_capture, face_capture)
print(f"\nreplay of enrollment captures -> accepted={decision.accepted} "
      f"(fp {decision.fingerprint_score:.2f}, face {decision.face_score:.2f})")

wrong = BiometricCapture(kind=CaptureKind.FINGERPRINT, payload=b"someone else" * 12)
decision = registry.authenticate("901234567V", wrong, face_capture)
print(f"wrong fingerprint                -> accepted={decision.accepted} "
      f"(fp {decision.fingerprint_score:.2f}, face {decision.face_score:.2f})")

print(f"\naudit log now holds {len(audit)} entries (1 enroll + 2 attempts)")
