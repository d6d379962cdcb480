"""Exception taxonomy shared across the toolkit.

Every domain error raised by the library derives from VotekitError so
callers (HTTP layer, CLI) can map failures to status codes / exit codes
in one place via the ``code`` attribute.
"""


class VotekitError(Exception):
    """Base class for all domain errors."""

    code = "error"


# --- identity / registry ---------------------------------------------------

class EmptyCapture(VotekitError):
    code = "empty_capture"


class KindMismatch(VotekitError):
    code = "kind_mismatch"


class InvalidNicFormat(VotekitError):
    code = "invalid_nic_format"


class DuplicateNic(VotekitError):
    code = "duplicate_nic"


class UnknownNic(VotekitError):
    code = "unknown_nic"


# --- elections ---------------------------------------------------------------

class Unauthorized(VotekitError):
    code = "unauthorized"


class TooFewCandidates(VotekitError):
    code = "too_few_candidates"


class InvalidWindow(VotekitError):
    code = "invalid_window"


class UnknownElection(VotekitError):
    code = "unknown_election"


class NotEligible(VotekitError):
    code = "not_eligible"


class ElectionNotOpen(VotekitError):
    code = "election_not_open"


class NotOpen(VotekitError):
    code = "not_open"


class NotDraft(VotekitError):
    code = "not_draft"


class UnknownToken(VotekitError):
    code = "unknown_token"


class ExpiredToken(VotekitError):
    code = "expired_token"


class AlreadyConsumed(VotekitError):
    code = "already_consumed"


class StaleToken(VotekitError):
    code = "stale_token"


class AlreadyVoted(VotekitError):
    code = "already_voted"


class UnknownCandidate(VotekitError):
    code = "unknown_candidate"


class InvalidCredential(VotekitError):
    code = "invalid_credential"


# --- ML core -----------------------------------------------------------------

class TooFewRows(VotekitError):
    code = "too_few_rows"


class StratifyOnRegression(VotekitError):
    code = "stratify_on_regression"


class EmptyRows(VotekitError):
    code = "empty_rows"


class EmptyDataset(VotekitError):
    code = "empty_dataset"


class DimensionMismatch(VotekitError):
    code = "dimension_mismatch"


class NonFiniteInput(VotekitError):
    code = "non_finite_input"


class EmptyTestSet(VotekitError):
    code = "empty_test_set"


class TaskMismatch(VotekitError):
    code = "task_mismatch"


class BadModelFile(VotekitError):
    code = "bad_model_file"


# --- predictors --------------------------------------------------------------

class OutOfRange(VotekitError):
    code = "out_of_range"


class TooFewSamples(VotekitError):
    code = "too_few_samples"


class SingleClass(VotekitError):
    code = "single_class"


class EmptyList(VotekitError):
    code = "empty_list"


# --- projection --------------------------------------------------------------

class MalformedCurve(VotekitError):
    code = "malformed_curve"


class MissingCurve(VotekitError):
    code = "missing_curve"


class EmptyTally(VotekitError):
    code = "empty_tally"


class TooFewPoints(VotekitError):
    code = "too_few_points"


# --- weather gateway ---------------------------------------------------------

class Unreachable(VotekitError):
    code = "unreachable"


class BadStatus(VotekitError):
    code = "bad_status"

    def __init__(self, message: str, status: int = 0):
        super().__init__(message)
        self.status = status


class MalformedResponse(VotekitError):
    code = "malformed_response"


class FixtureNotFound(VotekitError):
    code = "fixture_not_found"


# --- persistence -------------------------------------------------------------

class CorruptJournal(VotekitError):
    code = "corrupt_journal"
