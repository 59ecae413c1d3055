"""The translation workflow engine and seal verification.

A translation runs through exactly five activities — Classification,
SignatureExtraction, Conversion, ConversionAssay, TransformationAssay —
each producing a signed, hash-chained :class:`ActivityData` record.  The
final transformation assay re-checks the whole process, builds the
:class:`Annotation` and creates the sealing signature.

Every check is a named rule; a failing rule raises :class:`RuleFailure`
carrying the exact rule identifier and the partial workflow report for
diagnosis.  Verification (:func:`verify_seal`) evaluates the seal
signature, the digest bindings, the report chain and the translator's
authorisation as of the recorded sealing time, so seals stay verifiable
after later revocations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, Sequence

from . import rules as R
from .errors import (
    AssayDeclined,
    EmptyTarget,
    InvariantViolation,
    MissingAttributeCertificate,
    PhaseOrderError,
    RuleFailure,
)
from .model import (
    ACTIVITY_NAMES,
    ActivityData,
    Annotation,
    ClassificationPayload,
    ConversionAssayPayload,
    ConversionPayload,
    DocumentContent,
    ExtractionPayload,
    LanguageSpecification,
    OriginalSignatureReport,
    RuleOutcome,
    SealedTranslation,
    SignedDocumentContainer,
    TransformationAssayPayload,
    TranslationSeal,
    WorkflowReport,
)
from .pki import (
    ALGORITHM_ID,
    AttributeCertificate,
    Certificate,
    KeyPair,
    RevocationRegistry,
    TrustAnchors,
    ValidationOutcome,
    sign,
    verify_attribute_certificate,
    verify_signature,
)
from .rules import RuleSet, WorkflowDefinition, default_workflow_definition
from .sealxml import (
    activity_chain_hash,
    activity_signing_input,
    annotation_to_node,
    content_signing_input,
    seal_signing_input,
    seal_signing_input_parts,
)
from .xmlutil import (
    canonical_bytes,
    content_digest,
    format_timestamp,
    normalize_timestamp,
    now_utc,
)

logger = logging.getLogger(__name__)

__all__ = [
    "OperatorInput",
    "SealerCredentials",
    "TranslationWorkflow",
    "run_translation_workflow",
    "SealVerificationReport",
    "verify_seal",
    "DEFAULT_COMPONENT_ID",
]

DEFAULT_COMPONENT_ID = "transeal-engine"


@dataclass(frozen=True)
class SealerCredentials:
    """Key, identity chain and authorisation of the sealing party."""

    key_pair: KeyPair
    certificate_chain: tuple[Certificate, ...]
    attribute_certificate: AttributeCertificate | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "certificate_chain", tuple(self.certificate_chain))
        if not self.certificate_chain:
            raise InvariantViolation("sealer has no certificate chain")
        if self.certificate_chain[0].public_key != self.key_pair.public_key:
            raise InvariantViolation("sealer key does not match the leaf certificate")


@dataclass(frozen=True)
class OperatorInput:
    """Everything the human translator supplies to the workflow."""

    source_format: str
    target_format: str
    language_specification: LanguageSpecification
    target_content: DocumentContent | None = None
    defects: tuple[str, ...] = ()
    comments: str | None = None
    accuracy_attestation: str = ""
    sealing_location: str = ""
    conversion_assay_confirmed: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "defects", tuple(self.defects))


# ---------------------------------------------------------------------------
# rule evaluators — classification
# ---------------------------------------------------------------------------

def rule_report_classification(
    source: SignedDocumentContainer, operator_input: OperatorInput
) -> tuple[ClassificationPayload, RuleOutcome]:
    """Record the operator's classification; it must describe this document."""
    rule_id = R.RULE_CLASSIFICATION_ReportOriginalDocumentClassification
    if not operator_input.source_format or not operator_input.target_format:
        raise RuleFailure(rule_id, "classification is missing a format identifier")
    if operator_input.source_format != source.content.format_id:
        raise RuleFailure(
            rule_id,
            f"declared source format {operator_input.source_format!r} does not "
            f"match the document ({source.content.format_id!r})",
        )
    payload = ClassificationPayload(
        source_format=operator_input.source_format,
        target_format=operator_input.target_format,
        language_specification=operator_input.language_specification,
    )
    return payload, RuleOutcome(rule_id, "pass", "classification recorded")


def rule_check_original_format(
    source: SignedDocumentContainer, rule_set: RuleSet
) -> RuleOutcome:
    rule_id = R.RULE_CLASSIFICATION_CheckOriginalFormat
    allowed = rule_set.values(rule_id, "allowedFormat")
    if source.content.format_id not in allowed:
        raise RuleFailure(
            rule_id,
            f"source format {source.content.format_id!r} is not among {list(allowed)}",
        )
    return RuleOutcome(rule_id, "pass", source.content.format_id)


def rule_check_target_format(
    operator_input: OperatorInput, rule_set: RuleSet
) -> RuleOutcome:
    rule_id = R.RULE_CLASSIFICATION_CheckTargetFormat
    allowed = rule_set.values(rule_id, "allowedFormat")
    if operator_input.target_format not in allowed:
        raise RuleFailure(
            rule_id,
            f"target format {operator_input.target_format!r} is not among {list(allowed)}",
        )
    return RuleOutcome(rule_id, "pass", operator_input.target_format)


# ---------------------------------------------------------------------------
# rule evaluators — signature extraction
# ---------------------------------------------------------------------------

def rule_verify_signatures(
    source: SignedDocumentContainer,
    rule_set: RuleSet,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    at_time: datetime,
):
    """Verify every embedded signature under the configured policy.

    Signature outcomes (valid/invalid/indeterminate) are *recorded*, not
    fatal; the rule itself fails only if the policy cannot be executed.
    """
    rule_id = R.RULE_SIGNATUREEXTRACTION_VerifySignature
    policy = rule_set.value(rule_id, "validationPolicy", "chain-to-anchor")
    if policy not in R.VALIDATION_POLICIES:
        raise RuleFailure(rule_id, f"unknown validation policy {policy!r}")
    payload_bytes = content_signing_input(source.content)
    outcomes = [
        verify_signature(payload_bytes, sig, anchors, registry, at_time)
        for sig in source.embedded_signatures
    ]
    detail = f"{len(outcomes)} signature(s) verified under policy {policy}"
    return outcomes, RuleOutcome(rule_id, "pass", detail)


def rule_report_signature_data(
    source: SignedDocumentContainer,
    validation_outcomes,
    rule_set: RuleSet,
) -> tuple[ExtractionPayload, RuleOutcome]:
    rule_id = R.RULE_SIGNATUREEXTRACTION_ReportSignatureData
    flag = rule_set.value(rule_id, "reportOnlyUserCertificate", "false")
    if flag not in ("true", "false"):
        raise RuleFailure(rule_id, f"reportOnlyUserCertificate must be true/false, got {flag!r}")
    report_only = flag == "true"
    reports = []
    for signature, outcome in zip(source.embedded_signatures, validation_outcomes):
        path_report = outcome.path_report
        if report_only:
            path_report = path_report[:1]
        authority = None
        for ac in signature.attribute_certificates:
            value = ac.attribute("authority")
            if value is not None:
                authority = value
                break
        reports.append(
            OriginalSignatureReport(
                signature_validation_result=outcome.result,
                signer=signature.signer_certificate.subject,
                authority=authority,
                signing_time=signature.signing_time,
                signing_time_source=signature.time_source,
                report_only_user_certificate=report_only,
                certificates=path_report,
                attribute_certificates=outcome.attr_report,
            )
        )
    detail = f"{len(reports)} signature report(s) recorded"
    return ExtractionPayload(tuple(reports)), RuleOutcome(rule_id, "pass", detail)


# ---------------------------------------------------------------------------
# rule evaluators — transformation assay
# ---------------------------------------------------------------------------

def _performer_matches(kind: str, performer_id: str) -> bool:
    needs_operator = "operator" in kind
    needs_component = "component" in kind
    has_operator = "operator:" in performer_id
    has_component = "component:" in performer_id
    return needs_operator == has_operator and needs_component == has_component


def rule_check_used_components(
    report: WorkflowReport, definition: WorkflowDefinition
) -> RuleOutcome:
    """All preceding activities must be present with their performers."""
    rule_id = R.RULE_TRANSFORMATIONASSAY_CheckUsedComponents
    for activity_def in definition.activities[:4]:
        record = report.activity(activity_def.name)
        if record is None:
            raise RuleFailure(rule_id, f"activity {activity_def.name} is missing")
        if not _performer_matches(activity_def.performer_kind, record.performer_id):
            raise RuleFailure(
                rule_id,
                f"activity {activity_def.name} performed by {record.performer_id!r}, "
                f"expected {activity_def.performer_kind}",
            )
    return RuleOutcome(rule_id, "pass", "all workflow components used")


def rule_check_signature_extraction(
    report: WorkflowReport, rule_set: RuleSet, source: SignedDocumentContainer
) -> RuleOutcome:
    """The extraction record must report every embedded signature in full."""
    rule_id = R.RULE_TRANSFORMATIONASSAY_CheckSignatureExtraction
    record = report.activity("SignatureExtraction")
    if record is None:
        raise RuleFailure(rule_id, "no signature extraction record")
    payload = record.payload
    expected = len(source.embedded_signatures)
    if len(payload.original_signatures) != expected:
        raise RuleFailure(
            rule_id,
            f"extraction reported {len(payload.original_signatures)} signature(s), "
            f"document carries {expected}",
        )
    flag = rule_set.value(
        R.RULE_SIGNATUREEXTRACTION_ReportSignatureData, "reportOnlyUserCertificate", "false"
    )
    for index, sig_report in enumerate(payload.original_signatures):
        if flag == "true" and len(sig_report.certificates) != 1:
            raise RuleFailure(
                rule_id, f"report {index} must carry only the user certificate"
            )
        if flag == "false":
            chain_len = len(source.embedded_signatures[index].certificate_chain)
            if len(sig_report.certificates) != chain_len:
                raise RuleFailure(
                    rule_id,
                    f"report {index} carries {len(sig_report.certificates)} "
                    f"certificates, chain has {chain_len}",
                )
    return RuleOutcome(rule_id, "pass", f"{expected} signature(s) fully reported")


def rule_check_consistency(
    report: WorkflowReport,
    definition: WorkflowDefinition,
    rule_set: RuleSet,
    source: SignedDocumentContainer,
    target: DocumentContent,
) -> RuleOutcome:
    """Workflow report must be consistent with definition, rule set and data."""
    rule_id = R.RULE_TRANSFORMATIONASSAY_CheckConsistencyOfReport
    names = tuple(record.activity_name for record in report.activities)
    if names != ACTIVITY_NAMES[:4]:
        raise RuleFailure(rule_id, f"activity sequence {list(names)} out of order")
    if report.rule_set_digest != rule_set.digest():
        raise RuleFailure(rule_id, "report cites a different rule set digest")
    if report.source_content_id != source.content.content_id:
        raise RuleFailure(rule_id, "report cites a different source document")
    for record in report.activities:
        expected_rules = definition.activity(record.activity_name).rule_ids
        recorded = tuple(o.rule_id for o in record.rule_outcomes)
        if recorded != expected_rules:
            raise RuleFailure(
                rule_id,
                f"activity {record.activity_name} recorded rules {list(recorded)}, "
                f"definition assigns {list(expected_rules)}",
            )
    classification = report.activity("Classification").payload
    if classification.source_format != source.content.format_id:
        raise RuleFailure(rule_id, "classified source format differs from document")
    if classification.target_format != target.format_id:
        raise RuleFailure(
            rule_id,
            f"target format {target.format_id!r} differs from classified "
            f"{classification.target_format!r}",
        )
    conversion = report.activity("Conversion").payload
    if conversion.target_content_id != target.content_id:
        raise RuleFailure(rule_id, "conversion record cites a different target document")
    assay = report.activity("ConversionAssay").payload
    if not assay.confirmed:
        raise RuleFailure(rule_id, "conversion assay is not confirmed")
    return RuleOutcome(rule_id, "pass", "report is consistent")


def rule_check_report_signatures(
    report: WorkflowReport,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    at_time: datetime,
) -> RuleOutcome:
    """Hash chain and per-record signatures of the report must hold."""
    rule_id = R.RULE_TRANSFORMATIONASSAY_CheckSignatures
    previous = None
    for record in report.activities:
        if previous is None:
            if record.prev_hash is not None:
                raise RuleFailure(rule_id, "first record carries a chain hash")
        elif record.prev_hash != activity_chain_hash(previous):
            raise RuleFailure(
                rule_id, f"broken activity hash chain at {record.activity_name}"
            )
        outcome = verify_signature(
            activity_signing_input(record),
            record.activity_signature,
            anchors,
            registry,
            at_time,
        )
        if outcome.result != "valid":
            raise RuleFailure(
                rule_id,
                f"activity {record.activity_name} signature is {outcome.result}: "
                f"{outcome.detail}",
            )
        if record.activity_signature.signing_time != record.end_time:
            raise RuleFailure(
                rule_id,
                f"activity {record.activity_name} signature time differs from its end time",
            )
        previous = record
    return RuleOutcome(rule_id, "pass", "report chain and signatures verified")


def rule_copy_original_document(
    report: WorkflowReport, source: SignedDocumentContainer
) -> tuple[SignedDocumentContainer, RuleOutcome]:
    rule_id = R.RULE_TRANSFORMATIONASSAY_CopyOriginalDocumentToAnnotation
    if source.content.content_id != report.source_content_id:
        raise RuleFailure(
            rule_id, "document to embed differs from the processed source"
        )
    return source, RuleOutcome(rule_id, "pass", source.content.content_id)


def rule_copy_defects(
    report: WorkflowReport, operator_input: OperatorInput
) -> tuple[tuple[str, ...], RuleOutcome]:
    """Collect defect notes from the conversion log and the final input."""
    rule_id = R.RULE_TRANSFORMATIONASSAY_CopyDefectsToAnnotation
    conversion = report.activity("Conversion")
    noted: list[str] = list(conversion.payload.error_log) if conversion else []
    for defect in operator_input.defects:
        if defect not in noted:
            noted.append(defect)
    for defect in noted:
        if not defect.strip():
            raise RuleFailure(rule_id, "defect entries must be non-empty")
    return tuple(noted), RuleOutcome(rule_id, "pass", f"{len(noted)} defect(s) copied")


def rule_copy_validation_results(
    report: WorkflowReport, source: SignedDocumentContainer
) -> tuple[tuple[OriginalSignatureReport, ...], RuleOutcome]:
    rule_id = R.RULE_TRANSFORMATIONASSAY_CopyOriginalValidationResultToAnnotation
    record = report.activity("SignatureExtraction")
    if record is None:
        raise RuleFailure(rule_id, "no signature extraction record to copy from")
    reports = record.payload.original_signatures
    if len(reports) != len(source.embedded_signatures):
        raise RuleFailure(
            rule_id,
            f"{len(reports)} validation result(s) for "
            f"{len(source.embedded_signatures)} embedded signature(s)",
        )
    results = ",".join(r.signature_validation_result for r in reports) or "none"
    return reports, RuleOutcome(rule_id, "pass", f"results: {results}")


def rule_copy_signature_data(
    reports: Sequence[OriginalSignatureReport], rule_set: RuleSet
) -> tuple[tuple[OriginalSignatureReport, ...], RuleOutcome]:
    """Filter the reported signature data down to the configured fields."""
    rule_id = R.RULE_TRANSFORMATIONASSAY_CopyOriginalSignatureDataToAnnotation
    fields = rule_set.values(rule_id, "field")
    for name in fields:
        if name not in R.COPYABLE_SIGNATURE_FIELDS:
            raise RuleFailure(rule_id, f"unknown signature data field {name!r}")
    copied = []
    for report in reports:
        copied.append(
            OriginalSignatureReport(
                signature_validation_result=report.signature_validation_result,
                signer=report.signer,
                authority=report.authority if "authority" in fields else None,
                signing_time=report.signing_time,
                signing_time_source=report.signing_time_source,
                report_only_user_certificate=report.report_only_user_certificate,
                certificates=report.certificates,
                attribute_certificates=(
                    report.attribute_certificates
                    if "attributeCertificates" in fields
                    else ()
                ),
            )
        )
    return tuple(copied), RuleOutcome(
        rule_id, "pass", f"fields copied: {','.join(fields) or 'defaults'}"
    )


def rule_build_annotation(
    source: SignedDocumentContainer,
    classification: ClassificationPayload,
    defects: tuple[str, ...],
    signature_reports: tuple[OriginalSignatureReport, ...],
    operator_input: OperatorInput,
    sealer: SealerCredentials,
    sealing_time: datetime,
    *,
    time_source: str | None = None,
) -> tuple[Annotation, RuleOutcome]:
    rule_id = R.RULE_TRANSFORMATIONASSAY_BuildAnnotation
    if not operator_input.accuracy_attestation.strip():
        raise RuleFailure(rule_id, "accuracy attestation is empty")
    if not operator_input.sealing_location.strip():
        raise RuleFailure(rule_id, "sealing location is empty")
    ac = sealer.attribute_certificate
    annotation = Annotation(
        original_document=source,
        language_specification=classification.language_specification,
        defects=defects,
        original_signatures=signature_reports,
        comments=operator_input.comments,
        accuracy_attestation=operator_input.accuracy_attestation,
        sealing_time=sealing_time,
        sealing_time_source=time_source,
        sealing_location=operator_input.sealing_location,
        translator_role=ac.attribute("role") if ac else None,
        translator_authority=ac.attribute("authority") if ac else None,
    )
    return annotation, RuleOutcome(rule_id, "pass", "annotation assembled")


def rule_create_signature_check(
    sealer: SealerCredentials,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    sealing_time: datetime,
) -> RuleOutcome:
    """Authorisation gate: the sealer needs a live role attribute certificate."""
    rule_id = R.RULE_TRANSFORMATIONASSAY_CreateSignature
    ac = sealer.attribute_certificate
    if ac is None:
        raise MissingAttributeCertificate(
            rule_id, "sealer holds no authorisation attribute certificate"
        )
    if ac.attribute("role") is None:
        raise MissingAttributeCertificate(
            rule_id, "attribute certificate carries no role attribute"
        )
    leaf = sealer.certificate_chain[0]
    if (ac.holder_issuer, ac.holder_serial) != leaf.identity:
        raise RuleFailure(
            rule_id, "attribute certificate is bound to a different holder"
        )
    status, detail = verify_attribute_certificate(
        ac, anchors, registry, sealing_time, sealer.certificate_chain
    )
    if status != "valid":
        raise RuleFailure(
            rule_id, f"authorisation attribute certificate is {status}: {detail}"
        )
    return RuleOutcome(
        rule_id, "pass", f"sealing as {ac.attribute('role')} ({ALGORITHM_ID})"
    )


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------

class TranslationWorkflow:
    """Drives one translation through its five activities.

    Activities must be invoked in order; each produces a signed activity
    record chained to its predecessor.  ``transformation_assay`` returns the
    finished :class:`SealedTranslation`.
    """

    def __init__(
        self,
        source: SignedDocumentContainer,
        rule_set: RuleSet,
        sealer: SealerCredentials,
        anchors: TrustAnchors,
        registry: RevocationRegistry,
        *,
        operator_name: str,
        component_id: str = DEFAULT_COMPONENT_ID,
        definition: WorkflowDefinition | None = None,
        clock: Callable[[], datetime] | None = None,
    ):
        self.source = source
        self.rule_set = rule_set
        self.sealer = sealer
        self.anchors = anchors
        self.registry = registry
        self.operator_name = operator_name
        self.component_id = component_id
        self.definition = definition or default_workflow_definition()
        source_clock = clock or now_utc
        # all recorded times are second-precision UTC, like the wire format
        self.clock = lambda: normalize_timestamp(source_clock())
        self._activities: list[ActivityData] = []
        self._target: DocumentContent | None = None

    # -- state ----------------------------------------------------------------

    @property
    def phase(self) -> str:
        """Name of the next activity, or 'Sealed' when finished."""
        done = len(self._activities)
        return ACTIVITY_NAMES[done] if done < len(ACTIVITY_NAMES) else "Sealed"

    @property
    def target(self) -> DocumentContent | None:
        return self._target

    def report(self) -> WorkflowReport:
        return WorkflowReport(
            rule_set_digest=self.rule_set.digest(),
            source_content_id=self.source.content.content_id,
            activities=tuple(self._activities),
        )

    def _require_phase(self, name: str) -> None:
        if self.phase != name:
            raise PhaseOrderError(
                f"cannot run {name} now; next activity is {self.phase}"
            )

    def _performer(self, activity_name: str) -> str:
        kind = self.definition.activity(activity_name).performer_kind
        parts = []
        if "operator" in kind:
            parts.append(f"operator:{self.operator_name}")
        if "component" in kind:
            parts.append(f"component:{self.component_id}")
        return "+".join(parts)

    def _append_activity(
        self,
        name: str,
        start: datetime,
        outcomes: Sequence[RuleOutcome],
        payload,
        *,
        end: datetime | None = None,
    ) -> ActivityData:
        end = end or self.clock()
        if end < start:
            end = start
        prev_hash = (
            activity_chain_hash(self._activities[-1]) if self._activities else None
        )
        # the draft is only ever serialized without its signature element
        draft = ActivityData(
            activity_name=name,
            performer_id=self._performer(name),
            start_time=start,
            end_time=end,
            rule_outcomes=tuple(outcomes),
            payload=payload,
            prev_hash=prev_hash,
            activity_signature=None,  # type: ignore[arg-type]
        )
        signature = sign(
            activity_signing_input(draft),
            self.sealer.key_pair,
            self.sealer.certificate_chain,
            signing_time=end,
        )
        record = ActivityData(
            activity_name=draft.activity_name,
            performer_id=draft.performer_id,
            start_time=draft.start_time,
            end_time=draft.end_time,
            rule_outcomes=draft.rule_outcomes,
            payload=draft.payload,
            prev_hash=draft.prev_hash,
            activity_signature=signature,
        )
        self._activities.append(record)
        logger.debug("activity %s recorded by %s", name, record.performer_id)
        return record

    def _fail(self, exc: RuleFailure) -> RuleFailure:
        exc.partial_report = self.report()
        return exc

    # -- phases ----------------------------------------------------------------

    def classify(self, operator_input: OperatorInput) -> ActivityData:
        """Phase 1: record formats and language specification."""
        self._require_phase("Classification")
        start = self.clock()
        outcomes: list[RuleOutcome] = []
        try:
            payload, outcome = rule_report_classification(self.source, operator_input)
            outcomes.append(outcome)
            outcomes.append(rule_check_original_format(self.source, self.rule_set))
            outcomes.append(rule_check_target_format(operator_input, self.rule_set))
        except RuleFailure as exc:
            raise self._fail(exc)
        return self._append_activity("Classification", start, outcomes, payload)

    def extract_signatures(self) -> ActivityData:
        """Phase 2: verify and report the original document's signatures."""
        self._require_phase("SignatureExtraction")
        start = self.clock()
        try:
            validation, verify_outcome = rule_verify_signatures(
                self.source, self.rule_set, self.anchors, self.registry, start
            )
            payload, report_outcome = rule_report_signature_data(
                self.source, validation, self.rule_set
            )
        except RuleFailure as exc:
            raise self._fail(exc)
        return self._append_activity(
            "SignatureExtraction", start, [verify_outcome, report_outcome], payload
        )

    def record_conversion(
        self, target: DocumentContent, defects: Sequence[str] = ()
    ) -> ActivityData:
        """Phase 3: record the (out-of-band, human) translation result."""
        self._require_phase("Conversion")
        start = self.clock()
        if not target.data:
            raise EmptyTarget("conversion produced an empty target document")
        end = self.clock()
        payload = ConversionPayload(
            target_content_id=target.content_id,
            performer=self.operator_name,
            method="human translation",
            duration_seconds=int((end - start).total_seconds()),
            error_log=tuple(defects),
        )
        self._target = target
        return self._append_activity("Conversion", start, [], payload, end=end)

    def conversion_assay(self, confirmed: bool) -> ActivityData:
        """Phase 4: the operator confirms the conversion result."""
        self._require_phase("ConversionAssay")
        start = self.clock()
        if not confirmed:
            raise AssayDeclined("operator declined the conversion result")
        return self._append_activity(
            "ConversionAssay", start, [], ConversionAssayPayload(confirmed=True)
        )

    def transformation_assay(self, operator_input: OperatorInput) -> SealedTranslation:
        """Phase 5: re-check everything, build the annotation, seal."""
        self._require_phase("TransformationAssay")
        if self._target is None:
            raise PhaseOrderError("no conversion target recorded")
        return self._transformation_assay(self._target, operator_input)

    def _transformation_assay(
        self, target: DocumentContent, operator_input: OperatorInput
    ) -> SealedTranslation:
        start = self.clock()
        report = self.report()
        outcomes: list[RuleOutcome] = []
        try:
            outcomes.append(rule_check_used_components(report, self.definition))
            outcomes.append(
                rule_check_signature_extraction(report, self.rule_set, self.source)
            )
            outcomes.append(
                rule_check_consistency(
                    report, self.definition, self.rule_set, self.source, target
                )
            )
            outcomes.append(
                rule_check_report_signatures(
                    report, self.anchors, self.registry, self.clock()
                )
            )
            embedded, outcome = rule_copy_original_document(report, self.source)
            outcomes.append(outcome)
            defects, outcome = rule_copy_defects(report, operator_input)
            outcomes.append(outcome)
            raw_reports, outcome = rule_copy_validation_results(report, self.source)
            outcomes.append(outcome)
            signature_reports, outcome = rule_copy_signature_data(
                raw_reports, self.rule_set
            )
            outcomes.append(outcome)
            sealing_time = self.clock()
            classification = report.activity("Classification").payload
            annotation, outcome = rule_build_annotation(
                embedded,
                classification,
                defects,
                signature_reports,
                operator_input,
                self.sealer,
                sealing_time,
            )
            outcomes.append(outcome)
            outcomes.append(
                rule_create_signature_check(
                    self.sealer, self.anchors, self.registry, sealing_time
                )
            )
        except RuleFailure as exc:
            raise self._fail(exc)

        payload = TransformationAssayPayload(
            annotation_digest=content_digest(canonical_bytes(annotation_to_node(annotation))),
            seal_algorithm=ALGORITHM_ID,
            sealer=self.sealer.certificate_chain[0].subject,
        )
        self._append_activity(
            "TransformationAssay", start, outcomes, payload, end=sealing_time
        )
        final_report = self.report()
        target_digest = target.content_id
        seal_signature = sign(
            seal_signing_input_parts(annotation, final_report, target_digest),
            self.sealer.key_pair,
            self.sealer.certificate_chain,
            (self.sealer.attribute_certificate,),
            signing_time=annotation.sealing_time,
            time_source=annotation.sealing_time_source,
        )
        seal = TranslationSeal(
            annotation=annotation,
            workflow_report=final_report,
            target_digest=target_digest,
            seal_signature=seal_signature,
        )
        logger.info(
            "seal created for %s -> %s by %s",
            final_report.source_content_id,
            target_digest,
            self.operator_name,
        )
        return SealedTranslation(target_content=target, seal=seal)


def run_translation_workflow(
    source: SignedDocumentContainer,
    operator_input: OperatorInput,
    rule_set: RuleSet,
    sealer: SealerCredentials,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    *,
    operator_name: str,
    component_id: str = DEFAULT_COMPONENT_ID,
    clock: Callable[[], datetime] | None = None,
) -> SealedTranslation:
    """Run all five phases in one call (the CLI / one-shot service path)."""
    if operator_input.target_content is None:
        raise EmptyTarget("operator input carries no target document")
    flow = TranslationWorkflow(
        source,
        rule_set,
        sealer,
        anchors,
        registry,
        operator_name=operator_name,
        component_id=component_id,
        clock=clock,
    )
    flow.classify(operator_input)
    flow.extract_signatures()
    flow.record_conversion(operator_input.target_content, operator_input.defects)
    flow.conversion_assay(operator_input.conversion_assay_confirmed)
    return flow.transformation_assay(operator_input)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SealVerificationReport:
    """Outcome of verifying a sealed translation.

    The four gates — seal signature, digest bindings, report chain and
    translator authorisation — are reported separately so a caller can
    tell *why* a seal is rejected.  All time-dependent checks use the
    sealing time recorded in the annotation, so revocations issued after
    sealing do not retroactively break the seal.
    """

    seal_signature: "ValidationOutcome"
    binding_ok: bool
    binding_failures: tuple[str, ...]
    report_chain_ok: bool
    chain_failures: tuple[str, ...]
    authorisation_ok: bool
    translator_role: str | None
    translator_authority: str | None
    authorisation_detail: str
    rule_outcomes: tuple[tuple[str, RuleOutcome], ...]
    sealing_time: datetime
    source_content_id: str
    target_digest: str

    @property
    def ok(self) -> bool:
        return (
            self.seal_signature.result == "valid"
            and self.binding_ok
            and self.report_chain_ok
            and self.authorisation_ok
        )

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "sealSignature": {
                "result": self.seal_signature.result,
                "detail": self.seal_signature.detail,
            },
            "binding": {
                "ok": self.binding_ok,
                "failures": list(self.binding_failures),
            },
            "reportChain": {
                "ok": self.report_chain_ok,
                "failures": list(self.chain_failures),
            },
            "authorisation": {
                "ok": self.authorisation_ok,
                "role": self.translator_role,
                "authority": self.translator_authority,
                "detail": self.authorisation_detail,
            },
            "rules": [
                {
                    "activity": activity,
                    "ruleId": outcome.rule_id,
                    "outcome": outcome.outcome,
                    "detail": outcome.detail,
                }
                for activity, outcome in self.rule_outcomes
            ],
            "sealingTime": format_timestamp(self.sealing_time),
            "sourceContentId": self.source_content_id,
            "targetDigest": self.target_digest,
        }


def _check_bindings(sealed: SealedTranslation) -> list[str]:
    seal = sealed.seal
    annotation = seal.annotation
    report = seal.workflow_report
    target = sealed.target_content
    source = annotation.original_document
    failures: list[str] = []
    if seal.target_digest != target.content_id:
        failures.append("target digest does not match the target content")
    if report.source_content_id != source.content.content_id:
        failures.append("workflow report names a different source document")
    classification = report.activity("Classification")
    if classification is None:
        failures.append("no classification record")
    else:
        payload = classification.payload
        if payload.source_format != source.content.format_id:
            failures.append("classified source format differs from the embedded document")
        if payload.target_format != target.format_id:
            failures.append(
                f"target format {target.format_id!r} differs from classified "
                f"{payload.target_format!r}"
            )
    conversion = report.activity("Conversion")
    if conversion is None:
        failures.append("no conversion record")
    elif conversion.payload.target_content_id != target.content_id:
        failures.append("conversion record cites a different target document")
    if seal.seal_signature.signing_time != annotation.sealing_time:
        failures.append("seal signature time differs from the recorded sealing time")
    if seal.seal_signature.time_source != annotation.sealing_time_source:
        failures.append("seal signature time source differs from the annotation")
    return failures


def _check_report_chain(
    sealed: SealedTranslation,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    at_time: datetime,
) -> list[str]:
    report = sealed.seal.workflow_report
    failures: list[str] = []
    if len(report.activities) != len(ACTIVITY_NAMES):
        failures.append(
            f"report has {len(report.activities)} activities, "
            f"expected {len(ACTIVITY_NAMES)}"
        )
    previous = None
    for record in report.activities:
        if previous is None:
            if record.prev_hash is not None:
                failures.append("first activity carries a chain hash")
        elif record.prev_hash != activity_chain_hash(previous):
            failures.append(f"broken activity hash chain at {record.activity_name}")
        sig_outcome = verify_signature(
            activity_signing_input(record),
            record.activity_signature,
            anchors,
            registry,
            at_time,
        )
        if sig_outcome.result != "valid":
            failures.append(
                f"activity {record.activity_name} signature is "
                f"{sig_outcome.result}: {sig_outcome.detail}"
            )
        if record.activity_signature.signing_time != record.end_time:
            failures.append(
                f"activity {record.activity_name} signature time differs "
                f"from its end time"
            )
        previous = record
    assay = report.activity("TransformationAssay")
    if assay is not None:
        recomputed = content_digest(
            canonical_bytes(annotation_to_node(sealed.seal.annotation))
        )
        if assay.payload.annotation_digest != recomputed:
            failures.append(
                "annotation digest in the assay record does not match the annotation"
            )
    return failures


def _check_authorisation(
    sealed: SealedTranslation,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    at_time: datetime,
) -> tuple[bool, str | None, str | None, str]:
    signature = sealed.seal.seal_signature
    role_ac = None
    for ac in signature.attribute_certificates:
        if ac.attribute("role") is not None:
            role_ac = ac
            break
    if role_ac is None:
        return False, None, None, "seal carries no role attribute certificate"
    role = role_ac.attribute("role")
    authority = role_ac.attribute("authority")
    leaf = signature.signer_certificate
    if (role_ac.holder_issuer, role_ac.holder_serial) != leaf.identity:
        return (
            False,
            role,
            authority,
            "attribute certificate is bound to a different holder",
        )
    annotation = sealed.seal.annotation
    if annotation.translator_role != role or annotation.translator_authority != authority:
        return (
            False,
            role,
            authority,
            "annotation names a different role or authority than the "
            "attribute certificate grants",
        )
    status, detail = verify_attribute_certificate(
        role_ac, anchors, registry, at_time, signature.certificate_chain
    )
    if status != "valid":
        return False, role, authority, f"attribute certificate is {status}: {detail}"
    return True, role, authority, f"authorised as {role}"


def verify_seal(
    sealed: SealedTranslation,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
) -> SealVerificationReport:
    """Verify a sealed translation against trust anchors and revocations.

    Checks run as of the recorded sealing time.  ``report.ok`` is True only
    when the seal signature is valid, every digest binding holds, the
    activity chain verifies and the sealer was authorised when sealing.
    """
    seal = sealed.seal
    at_time = seal.annotation.sealing_time
    signature_outcome = verify_signature(
        seal_signing_input(seal), seal.seal_signature, anchors, registry, at_time
    )
    binding_failures = _check_bindings(sealed)
    chain_failures = _check_report_chain(sealed, anchors, registry, at_time)
    auth_ok, role, authority, auth_detail = _check_authorisation(
        sealed, anchors, registry, at_time
    )
    per_rule = tuple(
        (record.activity_name, outcome)
        for record in seal.workflow_report.activities
        for outcome in record.rule_outcomes
    )
    return SealVerificationReport(
        seal_signature=signature_outcome,
        binding_ok=not binding_failures,
        binding_failures=tuple(binding_failures),
        report_chain_ok=not chain_failures,
        chain_failures=tuple(chain_failures),
        authorisation_ok=auth_ok,
        translator_role=role,
        translator_authority=authority,
        authorisation_detail=auth_detail,
        rule_outcomes=per_rule,
        sealing_time=at_time,
        source_content_id=seal.workflow_report.source_content_id,
        target_digest=seal.target_digest,
    )
