"""Election management toolkit.

Biometric voter enrollment and matching, location-scoped elections with
anonymous ballots and one-time QR tokens, a tamper-evident audit chain,
and random-forest prediction engines for turnout, violence risk and
mid-election result projection.
"""

__version__ = "0.1.0"
