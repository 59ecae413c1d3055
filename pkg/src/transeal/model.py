"""Domain model for signed source documents and sealed translations.

The central artifact is the :class:`SealedTranslation`: the translated
target document plus a :class:`TranslationSeal` that binds together

* the :class:`Annotation` (embedded original, language details, signature
  reports, attestation, time/place, translator role and authority),
* the :class:`WorkflowReport` (hash-chained, per-record-signed activity
  records of the translation workflow), and
* the digest of the target content,

all under one sealing signature.  Values are immutable after construction;
structural invariants are enforced in ``__post_init__`` so that parsing a
tampered file fails before any cryptographic check runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Union

from . import i18n
from .errors import InvalidLanguageTag, InvariantViolation
from .pki import (
    AttributeCertificateData,
    CertificateData,
    EmbeddedSignature,
    VALIDATION_RESULTS,
)
from .xmlutil import content_digest

__all__ = [
    "compute_content_id",
    "DocumentContent",
    "SignedDocumentContainer",
    "LanguageSpecification",
    "OriginalSignatureReport",
    "Annotation",
    "RuleOutcome",
    "ClassificationPayload",
    "ExtractionPayload",
    "ConversionPayload",
    "ConversionAssayPayload",
    "TransformationAssayPayload",
    "ActivityData",
    "WorkflowReport",
    "TranslationSeal",
    "SealedTranslation",
    "ACTIVITY_NAMES",
    "PERFORMER_KINDS",
]


def compute_content_id(data: bytes) -> str:
    """Content identifier: ``sha-256:`` + lowercase hex SHA-256 of the bytes."""
    return content_digest(data)


def _require_digest(value: str, what: str) -> None:
    if not value.startswith("sha-256:") or len(value) != len("sha-256:") + 64:
        raise InvariantViolation(f"{what} is not a sha-256 content identifier")


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DocumentContent:
    """Raw document bytes plus format label and content identifier."""

    data: bytes
    format_id: str
    content_id: str

    def __post_init__(self) -> None:
        if not self.format_id:
            raise InvariantViolation("document format identifier is empty")
        if self.content_id != compute_content_id(self.data):
            raise InvariantViolation(
                "content identifier does not match the document bytes"
            )

    @classmethod
    def create(cls, data: bytes, format_id: str) -> "DocumentContent":
        return cls(data=data, format_id=format_id, content_id=compute_content_id(data))


@dataclass(frozen=True)
class SignedDocumentContainer:
    """A document plus zero or more embedded signatures over its content."""

    content: DocumentContent
    embedded_signatures: tuple[EmbeddedSignature, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "embedded_signatures", tuple(self.embedded_signatures)
        )


# ---------------------------------------------------------------------------
# language specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LanguageSpecification:
    """Source/target languages plus transliteration and calendar details."""

    source_language: str
    target_language: str
    transliterations: tuple[tuple[str, str], ...] = ()
    calendar_conversion: str | None = None

    def __post_init__(self) -> None:
        i18n.validate_language_tag(self.source_language)
        i18n.validate_language_tag(self.target_language)
        if self.source_language.lower() == self.target_language.lower():
            raise InvalidLanguageTag(
                f"source and target language are both {self.source_language!r}"
            )
        object.__setattr__(
            self, "transliterations", tuple(tuple(t) for t in self.transliterations)
        )
        for script, standard in self.transliterations:
            if not script or not standard:
                raise InvariantViolation("transliteration script/standard is empty")
        if self.calendar_conversion is not None and not self.calendar_conversion:
            raise InvariantViolation("calendar conversion label is empty")


# ---------------------------------------------------------------------------
# signature reports (what the annotation says about original signatures)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OriginalSignatureReport:
    """Validation result and certificate data for one original signature."""

    signature_validation_result: str  # valid | invalid | indeterminate
    signer: str
    authority: str | None
    signing_time: datetime
    signing_time_source: str | None
    report_only_user_certificate: bool
    certificates: tuple[CertificateData, ...]
    attribute_certificates: tuple[AttributeCertificateData, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "certificates", tuple(self.certificates))
        object.__setattr__(
            self, "attribute_certificates", tuple(self.attribute_certificates)
        )
        if self.signature_validation_result not in VALIDATION_RESULTS:
            raise InvariantViolation(
                f"unknown validation result {self.signature_validation_result!r}"
            )
        if not self.certificates:
            raise InvariantViolation("signature report carries no certificate data")
        if self.report_only_user_certificate and len(self.certificates) != 1:
            raise InvariantViolation(
                "user-certificate-only report must carry exactly one certificate"
            )


# ---------------------------------------------------------------------------
# annotation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Annotation:
    """Everything a conventional certified translation states on paper."""

    original_document: SignedDocumentContainer
    language_specification: LanguageSpecification
    defects: tuple[str, ...]
    original_signatures: tuple[OriginalSignatureReport, ...]
    comments: str | None
    accuracy_attestation: str
    sealing_time: datetime
    sealing_time_source: str | None
    sealing_location: str
    translator_role: str | None
    translator_authority: str | None

    def __post_init__(self) -> None:
        object.__setattr__(self, "defects", tuple(self.defects))
        object.__setattr__(
            self, "original_signatures", tuple(self.original_signatures)
        )
        if not self.accuracy_attestation:
            raise InvariantViolation("accuracy attestation is empty")
        if not self.sealing_location:
            raise InvariantViolation("sealing location is empty")
        for defect in self.defects:
            if not defect:
                raise InvariantViolation("defect entries must be non-empty strings")
        expected = len(self.original_document.embedded_signatures)
        if len(self.original_signatures) != expected:
            raise InvariantViolation(
                f"annotation reports {len(self.original_signatures)} original "
                f"signatures, embedded document carries {expected}"
            )


# ---------------------------------------------------------------------------
# workflow records
# ---------------------------------------------------------------------------

ACTIVITY_NAMES = (
    "Classification",
    "SignatureExtraction",
    "Conversion",
    "ConversionAssay",
    "TransformationAssay",
)

# who performs each activity: the translating operator, the engine, or both
PERFORMER_KINDS = {
    "Classification": "operator+component",
    "SignatureExtraction": "component",
    "Conversion": "operator",
    "ConversionAssay": "operator",
    "TransformationAssay": "operator+component",
}


@dataclass(frozen=True)
class RuleOutcome:
    rule_id: str
    outcome: str  # pass | fail
    detail: str | None = None

    def __post_init__(self) -> None:
        if self.outcome not in ("pass", "fail"):
            raise InvariantViolation(f"unknown rule outcome {self.outcome!r}")
        if not self.rule_id:
            raise InvariantViolation("rule outcome without a rule identifier")


@dataclass(frozen=True)
class ClassificationPayload:
    source_format: str
    target_format: str
    language_specification: LanguageSpecification


@dataclass(frozen=True)
class ExtractionPayload:
    original_signatures: tuple[OriginalSignatureReport, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "original_signatures", tuple(self.original_signatures)
        )


@dataclass(frozen=True)
class ConversionPayload:
    target_content_id: str
    performer: str
    method: str
    duration_seconds: int
    error_log: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "error_log", tuple(self.error_log))
        _require_digest(self.target_content_id, "conversion target content id")
        if self.duration_seconds < 0:
            raise InvariantViolation("conversion duration must be non-negative")


@dataclass(frozen=True)
class ConversionAssayPayload:
    confirmed: bool


@dataclass(frozen=True)
class TransformationAssayPayload:
    annotation_digest: str
    seal_algorithm: str
    sealer: str

    def __post_init__(self) -> None:
        _require_digest(self.annotation_digest, "annotation digest")


ActivityPayload = Union[
    ClassificationPayload,
    ExtractionPayload,
    ConversionPayload,
    ConversionAssayPayload,
    TransformationAssayPayload,
]

_PAYLOAD_TYPES = {
    "Classification": ClassificationPayload,
    "SignatureExtraction": ExtractionPayload,
    "Conversion": ConversionPayload,
    "ConversionAssay": ConversionAssayPayload,
    "TransformationAssay": TransformationAssayPayload,
}


@dataclass(frozen=True)
class ActivityData:
    """One audited workflow activity.

    ``prev_hash`` chains each record to the canonical bytes of its
    predecessor (None only for the first record); ``activity_signature``
    covers the record's canonical bytes with the signature element removed.
    """

    activity_name: str
    performer_id: str
    start_time: datetime
    end_time: datetime
    rule_outcomes: tuple[RuleOutcome, ...]
    payload: ActivityPayload
    prev_hash: str | None
    activity_signature: EmbeddedSignature

    def __post_init__(self) -> None:
        object.__setattr__(self, "rule_outcomes", tuple(self.rule_outcomes))
        if self.activity_name not in ACTIVITY_NAMES:
            raise InvariantViolation(f"unknown activity {self.activity_name!r}")
        if not self.performer_id:
            raise InvariantViolation("activity record without performer")
        if self.start_time > self.end_time:
            raise InvariantViolation("activity ends before it starts")
        expected = _PAYLOAD_TYPES[self.activity_name]
        if not isinstance(self.payload, expected):
            raise InvariantViolation(
                f"{self.activity_name} record carries a "
                f"{type(self.payload).__name__} payload"
            )
        if self.prev_hash is not None:
            _require_digest(self.prev_hash, "activity chain hash")


@dataclass(frozen=True)
class WorkflowReport:
    """Ordered activity records plus the process-wide constants they share."""

    rule_set_digest: str
    source_content_id: str
    activities: tuple[ActivityData, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "activities", tuple(self.activities))
        _require_digest(self.rule_set_digest, "rule set digest")
        _require_digest(self.source_content_id, "source content id")
        names = [a.activity_name for a in self.activities]
        if tuple(names) != ACTIVITY_NAMES[: len(names)]:
            raise InvariantViolation(
                f"activity sequence {names} does not follow the workflow order"
            )

    def activity(self, name: str) -> ActivityData | None:
        for record in self.activities:
            if record.activity_name == name:
                return record
        return None


# ---------------------------------------------------------------------------
# the seal
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranslationSeal:
    """Annotation + workflow report + target digest under one signature."""

    annotation: Annotation
    workflow_report: WorkflowReport
    target_digest: str
    seal_signature: EmbeddedSignature

    def __post_init__(self) -> None:
        _require_digest(self.target_digest, "target digest")
        source_id = self.annotation.original_document.content.content_id
        if self.workflow_report.source_content_id != source_id:
            raise InvariantViolation(
                "workflow report names a different source document than the "
                "annotation embeds"
            )
        self._check_role_binding()

    def _check_role_binding(self) -> None:
        """translatorRole/Authority must restate the sealing attribute cert."""
        role = self.annotation.translator_role
        authority = self.annotation.translator_authority
        if role is None and authority is None:
            return
        for ac in self.seal_signature.attribute_certificates:
            if role is not None and ac.attribute("role") != role:
                continue
            if authority is not None and ac.attribute("authority") != authority:
                continue
            return
        raise InvariantViolation(
            "annotation translator role/authority do not match any sealing "
            "attribute certificate"
        )


@dataclass(frozen=True)
class SealedTranslation:
    """The deliverable: target document plus its translation seal."""

    target_content: DocumentContent
    seal: TranslationSeal

    def __post_init__(self) -> None:
        if self.seal.target_digest != self.target_content.content_id:
            raise InvariantViolation(
                "targetDigest does not match the target content"
            )
