"""Exception hierarchy shared by all transeal modules.

Every error raised by the library derives from :class:`TransealError` so
callers (CLI, web service) can map failures onto exit codes / HTTP status
codes in one place.
"""

from __future__ import annotations


class TransealError(Exception):
    """Base class for all library errors."""


class ParseError(TransealError):
    """Malformed input bytes: XML syntax, schema order, base64, timestamps."""


class InvariantViolation(TransealError):
    """A structural invariant of a domain value does not hold.

    Raised both at construction time and when parsed input decodes cleanly
    but carries inconsistent content (for instance a stored digest that does
    not match the recomputed one) -- this signals tampering before any
    cryptographic check runs.
    """


class InvalidLanguageTag(TransealError):
    """A language tag violates the tag grammar.

    ``position`` is the index of the first offending character.
    """

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (position {position})")
        self.position = position


class OutOfDomain(TransealError):
    """A calendar-year conversion was requested outside its valid domain."""


# --- crypto / PKI -----------------------------------------------------------


class PkiError(TransealError):
    """Base class for key, certificate and revocation errors."""


class InvalidValidity(PkiError):
    """notBefore/notAfter do not form a proper validity window."""


class CAExpired(PkiError):
    """The issuing CA certificate is not currently valid."""


class HolderRevoked(PkiError):
    """Attribute certificate requested for a revoked holder certificate."""


class HolderExpired(PkiError):
    """Attribute certificate requested for an expired holder certificate."""


class EmptyAttributes(PkiError):
    """Attribute certificates must carry at least one attribute."""


class KeyMismatch(PkiError):
    """Signing key does not match the public key of the leaf certificate."""


class AlreadyRevokedWarning(UserWarning):
    """Revoking an already-revoked certificate is an idempotent no-op."""


# --- workflow ---------------------------------------------------------------


class WorkflowError(TransealError):
    """Base class for workflow-engine errors."""


class RuleFailure(WorkflowError):
    """A named workflow rule failed; aborts the running activity.

    ``rule_id`` is the exact rule identifier, ``partial_report`` carries the
    activity records completed before the failure (for diagnosis).
    """

    def __init__(self, rule_id: str, detail: str = "", partial_report=None):
        message = rule_id if not detail else f"{rule_id}: {detail}"
        super().__init__(message)
        self.rule_id = rule_id
        self.detail = detail
        self.partial_report = partial_report


class MissingAttributeCertificate(RuleFailure):
    """The sealer holds no authorisation attribute certificate."""


class EmptyTarget(WorkflowError):
    """Conversion produced an empty target document."""


class AssayDeclined(WorkflowError):
    """The operator declined to confirm the conversion result."""


class PhaseOrderError(WorkflowError):
    """A workflow phase was invoked out of order."""


# --- service ----------------------------------------------------------------


class ServiceError(TransealError):
    """Base class for web-service domain errors."""


class DuplicateName(ServiceError):
    """Translator name already registered."""


class NotInDirectory(ServiceError):
    """The responsible court directory has no matching entry."""


class Unauthorised(ServiceError):
    """Credential check failed or translator not authorised."""


class RevokedTranslator(ServiceError):
    """The translator's authorisation has been revoked."""


class NotFound(ServiceError):
    """No such translator / job."""
