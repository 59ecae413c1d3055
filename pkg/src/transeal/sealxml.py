"""Canonical XML mapping for the seal model.

Wire formats
------------

``.sdoc`` — root ``SignedDocument``: ``Content`` (base64), ``ContentFormat``,
``ContentId``, then zero or more ``Signature`` elements.  Each signature's
Ed25519 payload is the canonical byte sequence of the ``Content`` element
subtree.

``.tseal`` — root ``SealedTranslation``: ``TargetContent`` (base64),
``TargetFormat``, then ``TransformationSeal`` holding ``Annotation``,
``WorkflowReport``, ``TargetDigest`` and ``SealSignature``.  The sealing
signature's payload is the canonical byte sequence of the
``TransformationSeal`` subtree with ``SealSignature`` removed.

Annotation children appear in this fixed order (optional ones are simply
omitted): OriginalDocument, LanguageSpecification, Defects,
OriginalSignature (repeated), Comments, AccuracyAttestation, SealingTime,
SealingLocation, TranslatorRole, TranslatorAuthority.  Optional time-source
labels travel as a ``source`` attribute on the respective time element.

Because serialization is canonical, ``serialize -> parse -> serialize`` is
the identity on bytes.
"""

from __future__ import annotations

from .errors import InvariantViolation, ParseError
from .model import (
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
    compute_content_id,
)
from .pki import (
    AttributeCertificateData,
    CertificateData,
    EmbeddedSignature,
    attribute_certificate_from_node,
    attribute_certificate_to_node,
    certificate_from_node,
    certificate_to_node,
)
from .xmlutil import (
    NodeReader,
    XmlNode,
    b64decode_strict,
    b64encode,
    canonical_bytes,
    el,
    format_timestamp,
    leaf_text,
    parse_timestamp,
    parse_xml,
)

__all__ = [
    "canonicalize",
    "serialize_document",
    "parse_document",
    "serialize_seal",
    "parse_seal",
    "content_signing_input",
    "seal_signing_input",
    "activity_signing_input",
    "embedded_source_bytes",
]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _timestamp_node(tag: str, time, source: str | None) -> XmlNode:
    node = el(tag, text=format_timestamp(time))
    if source is not None:
        node.attrs["source"] = source
    return node


def _read_timestamp(reader: NodeReader, tag: str, *, path: str):
    node = reader.take(tag)
    unknown = set(node.attrs) - {"source"}
    if unknown:
        raise ParseError(f"unexpected attribute {sorted(unknown)[0]!r} on {path}/{tag}")
    if node.children:
        raise ParseError(f"expected text content in {path}/{tag}")
    return parse_timestamp(node.text, path=f"{path}/{tag}"), node.attrs.get("source")


def _bool_text(value: bool) -> str:
    return "true" if value else "false"


def _parse_bool(text: str, *, path: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise ParseError(f"expected 'true' or 'false' in {path}, found {text!r}")


# ---------------------------------------------------------------------------
# embedded signatures
# ---------------------------------------------------------------------------

def signature_to_node(sig: EmbeddedSignature, tag: str = "Signature") -> XmlNode:
    children = [
        el("Algorithm", text=sig.algorithm_id),
        el("SigningTime", text=format_timestamp(sig.signing_time)),
    ]
    if sig.time_source is not None:
        children.append(el("TimeSource", text=sig.time_source))
    children.append(el("Value", text=b64encode(sig.signature_value)))
    children.append(
        el("CertificateChain", *[certificate_to_node(c) for c in sig.certificate_chain])
    )
    if sig.attribute_certificates:
        children.append(
            el(
                "AttributeCertificates",
                *[attribute_certificate_to_node(a) for a in sig.attribute_certificates],
            )
        )
    return el(tag, *children)


def signature_from_node(
    node: XmlNode, tag: str = "Signature", *, path: str = ""
) -> EmbeddedSignature:
    path = path or tag
    r = NodeReader(node, expect=tag, path=path)
    r.check_attrs()
    algorithm = r.text("Algorithm")
    signing_time = parse_timestamp(r.text("SigningTime"), path=f"{path}/SigningTime")
    time_source = r.text_optional("TimeSource")
    value = b64decode_strict(r.text("Value"), path=f"{path}/Value")
    chain_reader = r.child("CertificateChain")
    chain = [
        certificate_from_node(n, path=f"{path}/CertificateChain/Certificate")
        for n in chain_reader.take_all("Certificate")
    ]
    chain_reader.finish()
    attr_certs = []
    ac_reader = r.child_optional("AttributeCertificates")
    if ac_reader is not None:
        attr_certs = [
            attribute_certificate_from_node(
                n, path=f"{path}/AttributeCertificates/AttributeCertificate"
            )
            for n in ac_reader.take_all("AttributeCertificate")
        ]
        ac_reader.finish()
        if not attr_certs:
            raise ParseError(f"{path}/AttributeCertificates is present but empty")
    r.finish()
    try:
        return EmbeddedSignature(
            signature_value=value,
            algorithm_id=algorithm,
            signing_time=signing_time,
            time_source=time_source,
            certificate_chain=tuple(chain),
            attribute_certificates=tuple(attr_certs),
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# signed documents (.sdoc)
# ---------------------------------------------------------------------------

def _document_child_nodes(doc: SignedDocumentContainer) -> list[XmlNode]:
    nodes = [
        el("Content", text=b64encode(doc.content.data)),
        el("ContentFormat", text=doc.content.format_id),
        el("ContentId", text=doc.content.content_id),
    ]
    nodes.extend(signature_to_node(s) for s in doc.embedded_signatures)
    return nodes


def document_to_node(doc: SignedDocumentContainer, tag: str = "SignedDocument") -> XmlNode:
    return el(tag, *_document_child_nodes(doc))


def document_from_node(
    node: XmlNode, tag: str = "SignedDocument", *, path: str = ""
) -> SignedDocumentContainer:
    path = path or tag
    r = NodeReader(node, expect=tag, path=path)
    r.check_attrs()
    data = b64decode_strict(r.text("Content"), path=f"{path}/Content")
    format_id = r.text("ContentFormat")
    content_id = r.text("ContentId")
    signatures = [
        signature_from_node(n, "Signature", path=f"{path}/Signature")
        for n in r.take_all("Signature")
    ]
    r.finish()
    try:
        content = DocumentContent(data=data, format_id=format_id, content_id=content_id)
        return SignedDocumentContainer(
            content=content, embedded_signatures=tuple(signatures)
        )
    except InvariantViolation:
        raise  # tampering signal: recomputed digest does not match


def content_signing_input(content: DocumentContent) -> bytes:
    """What embedded document signatures sign: the Content element subtree."""
    return canonical_bytes(el("Content", text=b64encode(content.data)))


def serialize_document(doc: SignedDocumentContainer) -> bytes:
    return canonical_bytes(document_to_node(doc))


def parse_document(data: bytes) -> SignedDocumentContainer:
    return document_from_node(parse_xml(data))


def embedded_source_bytes(annotation: Annotation) -> bytes:
    """Re-emit the embedded original as standalone ``.sdoc`` bytes.

    The annotation embeds the original container verbatim, so these bytes
    verify with the same tooling as the original file.
    """
    return serialize_document(annotation.original_document)


# ---------------------------------------------------------------------------
# language specification
# ---------------------------------------------------------------------------

def language_spec_to_node(spec: LanguageSpecification) -> XmlNode:
    children = [
        el("SourceLanguage", text=spec.source_language),
        el("TargetLanguage", text=spec.target_language),
    ]
    for script, standard in spec.transliterations:
        children.append(
            el("Transliteration", el("Script", text=script), el("Standard", text=standard))
        )
    if spec.calendar_conversion is not None:
        children.append(el("CalendarConversion", text=spec.calendar_conversion))
    return el("LanguageSpecification", *children)


def language_spec_from_node(node: XmlNode, *, path: str) -> LanguageSpecification:
    r = NodeReader(node, expect="LanguageSpecification", path=path)
    r.check_attrs()
    source = r.text("SourceLanguage")
    target = r.text("TargetLanguage")
    transliterations = []
    for t_node in r.take_all("Transliteration"):
        tr = NodeReader(t_node, path=f"{path}/Transliteration")
        transliterations.append((tr.text("Script"), tr.text("Standard")))
        tr.finish()
    calendar = r.text_optional("CalendarConversion")
    r.finish()
    try:
        return LanguageSpecification(
            source_language=source,
            target_language=target,
            transliterations=tuple(transliterations),
            calendar_conversion=calendar,
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# signature reports
# ---------------------------------------------------------------------------

def certificate_data_to_node(data: CertificateData) -> XmlNode:
    return el(
        "Certificate",
        el("Subject", text=data.subject),
        el("Issuer", text=data.issuer),
        el("Serial", text=data.serial),
        el(
            "ValidityPeriod",
            el("NotBefore", text=format_timestamp(data.not_before)),
            el("NotAfter", text=format_timestamp(data.not_after)),
        ),
        el("QCStatement", text=_bool_text(data.qc_statement)),
        el("CertificateStatus", text=data.certificate_status),
    )


def certificate_data_from_node(node: XmlNode, *, path: str) -> CertificateData:
    r = NodeReader(node, expect="Certificate", path=path)
    r.check_attrs()
    subject = r.text("Subject")
    issuer = r.text("Issuer")
    serial = r.text("Serial")
    vp = r.child("ValidityPeriod")
    not_before = parse_timestamp(vp.text("NotBefore"), path=f"{path}/NotBefore")
    not_after = parse_timestamp(vp.text("NotAfter"), path=f"{path}/NotAfter")
    vp.finish()
    qc = _parse_bool(r.text("QCStatement"), path=f"{path}/QCStatement")
    status = r.text("CertificateStatus")
    r.finish()
    try:
        return CertificateData(
            subject=subject,
            issuer=issuer,
            serial=serial,
            not_before=not_before,
            not_after=not_after,
            qc_statement=qc,
            certificate_status=status,
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


def attribute_data_to_node(data: AttributeCertificateData) -> XmlNode:
    attr_nodes = [
        el("Attribute", el("Type", text=a_type), el("Value", text=a_value))
        for a_type, a_value in data.attributes
    ]
    return el("AttributeCertificate", el("Issuer", text=data.issuer), *attr_nodes)


def attribute_data_from_node(node: XmlNode, *, path: str) -> AttributeCertificateData:
    r = NodeReader(node, expect="AttributeCertificate", path=path)
    r.check_attrs()
    issuer = r.text("Issuer")
    attributes = []
    for attr_node in r.take_all("Attribute"):
        ar = NodeReader(attr_node, path=f"{path}/Attribute")
        attributes.append((ar.text("Type"), ar.text("Value")))
        ar.finish()
    r.finish()
    try:
        return AttributeCertificateData(issuer=issuer, attributes=tuple(attributes))
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


def report_to_node(report: OriginalSignatureReport) -> XmlNode:
    children = [
        el("SignatureValidationResult", text=report.signature_validation_result),
        el("Signer", text=report.signer),
    ]
    if report.authority is not None:
        children.append(el("Authority", text=report.authority))
    children.append(
        _timestamp_node("SigningTime", report.signing_time, report.signing_time_source)
    )
    children.append(
        el("ReportOnlyUserCertificate", text=_bool_text(report.report_only_user_certificate))
    )
    children.append(
        el("Certificates", *[certificate_data_to_node(c) for c in report.certificates])
    )
    if report.attribute_certificates:
        children.append(
            el(
                "AttributeCertificates",
                *[attribute_data_to_node(a) for a in report.attribute_certificates],
            )
        )
    return el("OriginalSignature", *children)


def report_from_node(node: XmlNode, *, path: str) -> OriginalSignatureReport:
    r = NodeReader(node, expect="OriginalSignature", path=path)
    r.check_attrs()
    result = r.text("SignatureValidationResult")
    signer = r.text("Signer")
    authority = r.text_optional("Authority")
    signing_time, time_source = _read_timestamp(r, "SigningTime", path=path)
    report_only = _parse_bool(
        r.text("ReportOnlyUserCertificate"), path=f"{path}/ReportOnlyUserCertificate"
    )
    certs_reader = r.child("Certificates")
    certificates = [
        certificate_data_from_node(n, path=f"{path}/Certificates/Certificate")
        for n in certs_reader.take_all("Certificate")
    ]
    certs_reader.finish()
    attr_data = []
    ac_reader = r.child_optional("AttributeCertificates")
    if ac_reader is not None:
        attr_data = [
            attribute_data_from_node(
                n, path=f"{path}/AttributeCertificates/AttributeCertificate"
            )
            for n in ac_reader.take_all("AttributeCertificate")
        ]
        ac_reader.finish()
        if not attr_data:
            raise ParseError(f"{path}/AttributeCertificates is present but empty")
    r.finish()
    try:
        return OriginalSignatureReport(
            signature_validation_result=result,
            signer=signer,
            authority=authority,
            signing_time=signing_time,
            signing_time_source=time_source,
            report_only_user_certificate=report_only,
            certificates=tuple(certificates),
            attribute_certificates=tuple(attr_data),
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# annotation
# ---------------------------------------------------------------------------

def annotation_to_node(annotation: Annotation) -> XmlNode:
    children = [
        document_to_node(annotation.original_document, tag="OriginalDocument"),
        language_spec_to_node(annotation.language_specification),
    ]
    if annotation.defects:
        children.append(
            el("Defects", *[el("Defect", text=d) for d in annotation.defects])
        )
    children.extend(report_to_node(r) for r in annotation.original_signatures)
    if annotation.comments is not None:
        children.append(el("Comments", text=annotation.comments))
    children.append(el("AccuracyAttestation", text=annotation.accuracy_attestation))
    children.append(
        _timestamp_node(
            "SealingTime", annotation.sealing_time, annotation.sealing_time_source
        )
    )
    children.append(el("SealingLocation", text=annotation.sealing_location))
    if annotation.translator_role is not None:
        children.append(el("TranslatorRole", text=annotation.translator_role))
    if annotation.translator_authority is not None:
        children.append(el("TranslatorAuthority", text=annotation.translator_authority))
    return el("Annotation", *children)


def annotation_from_node(node: XmlNode, *, path: str = "Annotation") -> Annotation:
    r = NodeReader(node, expect="Annotation", path=path)
    r.check_attrs()
    original = document_from_node(
        r.take("OriginalDocument"), tag="OriginalDocument", path=f"{path}/OriginalDocument"
    )
    spec = language_spec_from_node(
        r.take("LanguageSpecification"), path=f"{path}/LanguageSpecification"
    )
    defects: list[str] = []
    defects_reader = r.child_optional("Defects")
    if defects_reader is not None:
        defects = [leaf_text(n, path=f"{path}/Defects")
                   for n in defects_reader.take_all("Defect")]
        defects_reader.finish()
        if not defects:
            raise ParseError(f"{path}/Defects is present but empty")
    reports = [
        report_from_node(n, path=f"{path}/OriginalSignature")
        for n in r.take_all("OriginalSignature")
    ]
    comments = r.text_optional("Comments")
    attestation = r.text("AccuracyAttestation")
    sealing_time, sealing_source = _read_timestamp(r, "SealingTime", path=path)
    location = r.text("SealingLocation")
    role = r.text_optional("TranslatorRole")
    authority = r.text_optional("TranslatorAuthority")
    r.finish()
    try:
        return Annotation(
            original_document=original,
            language_specification=spec,
            defects=tuple(defects),
            original_signatures=tuple(reports),
            comments=comments,
            accuracy_attestation=attestation,
            sealing_time=sealing_time,
            sealing_time_source=sealing_source,
            sealing_location=location,
            translator_role=role,
            translator_authority=authority,
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# workflow report
# ---------------------------------------------------------------------------

def _payload_to_nodes(payload) -> list[XmlNode]:
    if isinstance(payload, ClassificationPayload):
        return [
            el("SourceFormat", text=payload.source_format),
            el("TargetFormat", text=payload.target_format),
            language_spec_to_node(payload.language_specification),
        ]
    if isinstance(payload, ExtractionPayload):
        return [report_to_node(r) for r in payload.original_signatures]
    if isinstance(payload, ConversionPayload):
        nodes = [
            el("TargetContentId", text=payload.target_content_id),
            el(
                "ConversionProtocol",
                el("Performer", text=payload.performer),
                el("Method", text=payload.method),
                el("DurationSeconds", text=str(payload.duration_seconds)),
            ),
        ]
        if payload.error_log:
            nodes.append(
                el("ErrorLog", *[el("Entry", text=entry) for entry in payload.error_log])
            )
        return nodes
    if isinstance(payload, ConversionAssayPayload):
        return [el("Confirmed", text=_bool_text(payload.confirmed))]
    if isinstance(payload, TransformationAssayPayload):
        return [
            el("AnnotationDigest", text=payload.annotation_digest),
            el("SealAlgorithm", text=payload.seal_algorithm),
            el("Sealer", text=payload.sealer),
        ]
    raise InvariantViolation(f"unknown payload type {type(payload).__name__}")


def _payload_from_reader(name: str, r: NodeReader, *, path: str):
    if name == "Classification":
        source_format = r.text("SourceFormat")
        target_format = r.text("TargetFormat")
        spec = language_spec_from_node(
            r.take("LanguageSpecification"), path=f"{path}/LanguageSpecification"
        )
        return ClassificationPayload(source_format, target_format, spec)
    if name == "SignatureExtraction":
        reports = [
            report_from_node(n, path=f"{path}/OriginalSignature")
            for n in r.take_all("OriginalSignature")
        ]
        return ExtractionPayload(tuple(reports))
    if name == "Conversion":
        target_id = r.text("TargetContentId")
        proto = r.child("ConversionProtocol")
        performer = proto.text("Performer")
        method = proto.text("Method")
        duration_text = proto.text("DurationSeconds")
        proto.finish()
        if not duration_text.isdigit():
            raise ParseError(f"{path}/DurationSeconds is not a non-negative integer")
        entries: list[str] = []
        log_reader = r.child_optional("ErrorLog")
        if log_reader is not None:
            entries = [
                leaf_text(n, path=f"{path}/ErrorLog")
                for n in log_reader.take_all("Entry")
            ]
            log_reader.finish()
            if not entries:
                raise ParseError(f"{path}/ErrorLog is present but empty")
        return ConversionPayload(
            target_content_id=target_id,
            performer=performer,
            method=method,
            duration_seconds=int(duration_text),
            error_log=tuple(entries),
        )
    if name == "ConversionAssay":
        return ConversionAssayPayload(
            confirmed=_parse_bool(r.text("Confirmed"), path=f"{path}/Confirmed")
        )
    if name == "TransformationAssay":
        return TransformationAssayPayload(
            annotation_digest=r.text("AnnotationDigest"),
            seal_algorithm=r.text("SealAlgorithm"),
            sealer=r.text("Sealer"),
        )
    raise ParseError(f"unknown activity name {name!r} in {path}")


def activity_to_node(record: ActivityData, *, include_signature: bool = True) -> XmlNode:
    children = [
        el("ActivityName", text=record.activity_name),
        el("PerformerId", text=record.performer_id),
        el("StartTime", text=format_timestamp(record.start_time)),
        el("EndTime", text=format_timestamp(record.end_time)),
    ]
    for outcome in record.rule_outcomes:
        outcome_children = [
            el("RuleId", text=outcome.rule_id),
            el("Outcome", text=outcome.outcome),
        ]
        if outcome.detail is not None:
            outcome_children.append(el("Detail", text=outcome.detail))
        children.append(el("RuleOutcome", *outcome_children))
    children.append(el("Payload", *_payload_to_nodes(record.payload)))
    if record.prev_hash is not None:
        children.append(el("PrevHash", text=record.prev_hash))
    if include_signature:
        children.append(
            signature_to_node(record.activity_signature, tag="ActivitySignature")
        )
    return el("Activity", *children)


def activity_from_node(node: XmlNode, *, path: str) -> ActivityData:
    r = NodeReader(node, expect="Activity", path=path)
    r.check_attrs()
    name = r.text("ActivityName")
    performer = r.text("PerformerId")
    start = parse_timestamp(r.text("StartTime"), path=f"{path}/StartTime")
    end = parse_timestamp(r.text("EndTime"), path=f"{path}/EndTime")
    outcomes = []
    for o_node in r.take_all("RuleOutcome"):
        orr = NodeReader(o_node, path=f"{path}/RuleOutcome")
        rule_id = orr.text("RuleId")
        outcome = orr.text("Outcome")
        detail = orr.text_optional("Detail")
        orr.finish()
        try:
            outcomes.append(RuleOutcome(rule_id, outcome, detail))
        except InvariantViolation as exc:
            raise ParseError(f"{path}/RuleOutcome: {exc}") from None
    payload_reader = r.child("Payload")
    payload = _payload_from_reader(name, payload_reader, path=f"{path}/Payload")
    payload_reader.finish()
    prev_hash = r.text_optional("PrevHash")
    signature = signature_from_node(
        r.take("ActivitySignature"), "ActivitySignature", path=f"{path}/ActivitySignature"
    )
    r.finish()
    try:
        return ActivityData(
            activity_name=name,
            performer_id=performer,
            start_time=start,
            end_time=end,
            rule_outcomes=tuple(outcomes),
            payload=payload,
            prev_hash=prev_hash,
            activity_signature=signature,
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


def activity_signing_input(record: ActivityData) -> bytes:
    """What the activity signature covers: the record minus the signature."""
    return canonical_bytes(activity_to_node(record, include_signature=False))


def activity_chain_hash(record: ActivityData) -> str:
    """Digest over the full canonical record; next record's ``prev_hash``."""
    return compute_content_id(canonical_bytes(activity_to_node(record)))


def workflow_report_to_node(report: WorkflowReport) -> XmlNode:
    return el(
        "WorkflowReport",
        el("RuleSetDigest", text=report.rule_set_digest),
        el("SourceContentId", text=report.source_content_id),
        *[activity_to_node(a) for a in report.activities],
    )


def workflow_report_from_node(node: XmlNode, *, path: str = "WorkflowReport") -> WorkflowReport:
    r = NodeReader(node, expect="WorkflowReport", path=path)
    r.check_attrs()
    digest = r.text("RuleSetDigest")
    source_id = r.text("SourceContentId")
    activities = [
        activity_from_node(n, path=f"{path}/Activity") for n in r.take_all("Activity")
    ]
    r.finish()
    try:
        report = WorkflowReport(
            rule_set_digest=digest,
            source_content_id=source_id,
            activities=tuple(activities),
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None
    _check_chain(report, path=path)
    return report


def _check_chain(report: WorkflowReport, *, path: str) -> None:
    """Structural hash-chain check (no cryptography): prev-hash links hold."""
    previous: ActivityData | None = None
    for record in report.activities:
        if previous is None:
            if record.prev_hash is not None:
                raise InvariantViolation(
                    f"{path}: first activity record carries a chain hash"
                )
        else:
            expected = activity_chain_hash(previous)
            if record.prev_hash != expected:
                raise InvariantViolation(
                    f"{path}: broken activity hash chain at "
                    f"{record.activity_name}"
                )
        previous = record


# ---------------------------------------------------------------------------
# the seal and the sealed translation
# ---------------------------------------------------------------------------

def seal_to_node(seal: TranslationSeal, *, include_signature: bool = True) -> XmlNode:
    children = [
        annotation_to_node(seal.annotation),
        workflow_report_to_node(seal.workflow_report),
        el("TargetDigest", text=seal.target_digest),
    ]
    if include_signature:
        children.append(signature_to_node(seal.seal_signature, tag="SealSignature"))
    return el("TransformationSeal", *children)


def seal_from_node(node: XmlNode, *, path: str = "TransformationSeal") -> TranslationSeal:
    r = NodeReader(node, expect="TransformationSeal", path=path)
    r.check_attrs()
    annotation = annotation_from_node(r.take("Annotation"), path=f"{path}/Annotation")
    report = workflow_report_from_node(
        r.take("WorkflowReport"), path=f"{path}/WorkflowReport"
    )
    target_digest = r.text("TargetDigest")
    signature = signature_from_node(
        r.take("SealSignature"), "SealSignature", path=f"{path}/SealSignature"
    )
    r.finish()
    return TranslationSeal(
        annotation=annotation,
        workflow_report=report,
        target_digest=target_digest,
        seal_signature=signature,
    )


def seal_signing_input(seal: TranslationSeal) -> bytes:
    """What the sealing signature covers: the seal subtree minus itself."""
    return canonical_bytes(seal_to_node(seal, include_signature=False))


def seal_signing_input_parts(
    annotation: Annotation, report: WorkflowReport, target_digest: str
) -> bytes:
    """Signing input computed before the seal object exists (at creation)."""
    node = el(
        "TransformationSeal",
        annotation_to_node(annotation),
        workflow_report_to_node(report),
        el("TargetDigest", text=target_digest),
    )
    return canonical_bytes(node)


def sealed_translation_to_node(sealed: SealedTranslation) -> XmlNode:
    return el(
        "SealedTranslation",
        el("TargetContent", text=b64encode(sealed.target_content.data)),
        el("TargetFormat", text=sealed.target_content.format_id),
        seal_to_node(sealed.seal),
    )


def sealed_translation_from_node(node: XmlNode) -> SealedTranslation:
    r = NodeReader(node, expect="SealedTranslation")
    r.check_attrs()
    data = b64decode_strict(r.text("TargetContent"), path="SealedTranslation/TargetContent")
    format_id = r.text("TargetFormat")
    seal = seal_from_node(
        r.take("TransformationSeal"), path="SealedTranslation/TransformationSeal"
    )
    r.finish()
    target = DocumentContent.create(data, format_id)
    return SealedTranslation(target_content=target, seal=seal)


def serialize_seal(sealed: SealedTranslation) -> bytes:
    return canonical_bytes(sealed_translation_to_node(sealed))


def parse_seal(data: bytes) -> SealedTranslation:
    return sealed_translation_from_node(parse_xml(data))


# ---------------------------------------------------------------------------
# canonicalize: the public single entry point
# ---------------------------------------------------------------------------

_TO_NODE = {
    SealedTranslation: sealed_translation_to_node,
    SignedDocumentContainer: document_to_node,
    TranslationSeal: seal_to_node,
    Annotation: annotation_to_node,
    WorkflowReport: workflow_report_to_node,
    ActivityData: activity_to_node,
    EmbeddedSignature: signature_to_node,
    OriginalSignatureReport: report_to_node,
    LanguageSpecification: language_spec_to_node,
    CertificateData: certificate_data_to_node,
    AttributeCertificateData: attribute_data_to_node,
}


def canonicalize(value) -> bytes:
    """Canonical byte sequence of any seal-model value or subtree."""
    for cls, to_node in _TO_NODE.items():
        if isinstance(value, cls):
            return canonical_bytes(to_node(value))
    raise InvariantViolation(f"cannot canonicalize {type(value).__name__}")
