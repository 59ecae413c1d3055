#!/usr/bin/env python3
"""End-to-end walkthrough of the sealing pipeline, printed step by step.

Builds an in-memory PKI (signing root, court root, a certified translator
with a role attribute certificate), signs a source document, runs the
five-phase translation workflow, verifies the sealed result, and then
demonstrates that a one-byte tamper is caught.

Run:  python3 scripts/demo_walkthrough.py
"""

from __future__ import annotations

import hashlib
from datetime import datetime, timedelta, timezone

from transeal.errors import TransealError
from transeal.model import DocumentContent, LanguageSpecification, SignedDocumentContainer
from transeal.pki import (
    CertificateAuthority,
    RevocationRegistry,
    TrustAnchors,
    key_pair_from_seed,
    sign,
)
from transeal.rules import default_rule_set
from transeal.sealxml import content_signing_input, parse_seal, serialize_seal
from transeal.workflow import (
    OperatorInput,
    SealerCredentials,
    run_translation_workflow,
    verify_seal,
)

NOT_BEFORE = datetime(2026, 1, 1, tzinfo=timezone.utc)
NOT_AFTER = datetime(2031, 1, 1, tzinfo=timezone.utc)
TEXT = "text/plain;charset=utf-8"


def demo_key(label: str):
    return key_pair_from_seed(hashlib.sha256(f"demo:{label}".encode()).digest())


class DemoClock:
    """Strictly increasing whole-second clock so the demo is reproducible."""

    def __init__(self) -> None:
        self._now = datetime(2026, 3, 2, 9, 0, 0, tzinfo=timezone.utc)

    def __call__(self) -> datetime:
        self._now += timedelta(seconds=1)
        return self._now


def main() -> None:
    print("== 1. public-key infrastructure")
    root_ca = CertificateAuthority.create_root(
        "Seal Root CA", demo_key("root"), NOT_BEFORE, NOT_AFTER
    )
    court_ca = CertificateAuthority.create_root(
        "District Court", demo_key("court"), NOT_BEFORE, NOT_AFTER
    )
    anchors = TrustAnchors((root_ca.certificate, court_ca.certificate))
    registry = RevocationRegistry()

    translator_key = demo_key("erika")
    translator_cert = root_ca.issue_certificate(
        "Erika Muster", translator_key.public_key, NOT_BEFORE, NOT_AFTER,
        qc=True, now=NOT_BEFORE,
    )
    role_cert = court_ca.issue_attribute_certificate(
        translator_cert,
        (("role", "authorised translator fr-de"), ("authority", "District Court")),
        NOT_BEFORE,
        NOT_AFTER,
        registry=registry,
        now=NOT_BEFORE,
    )
    sealer = SealerCredentials(
        translator_key, (translator_cert, root_ca.certificate), role_cert
    )
    print(f"   translator certificate serial {translator_cert.serial}, "
          f"role: {dict(role_cert.attributes)['role']}")

    print("== 2. signed source document")
    source = DocumentContent.create("Bonjour le monde entier.".encode(), TEXT)
    notary_key = demo_key("notary")
    notary_cert = root_ca.issue_certificate(
        "Notary N", notary_key.public_key, NOT_BEFORE, NOT_AFTER, qc=True, now=NOT_BEFORE
    )
    source_signature = sign(
        content_signing_input(source),
        notary_key,
        (notary_cert, root_ca.certificate),
        signing_time=datetime(2026, 2, 1, 12, 0, tzinfo=timezone.utc),
    )
    container = SignedDocumentContainer(source, (source_signature,))
    print(f"   {source.content_id} signed by Notary N")

    print("== 3. five-phase workflow")
    operator_input = OperatorInput(
        source_format=TEXT,
        target_format=TEXT,
        language_specification=LanguageSpecification("fr", "de"),
        target_content=DocumentContent.create(
            "Hallo, weite Welt.".encode(), TEXT
        ),
        defects=("stamp partially illegible",),
        accuracy_attestation="Certified faithful and complete translation.",
        sealing_location="Berlin",
        conversion_assay_confirmed=True,
    )
    sealed = run_translation_workflow(
        container, operator_input, default_rule_set(), sealer, anchors, registry,
        operator_name="erika", clock=DemoClock(),
    )
    for record in sealed.seal.workflow_report.activities:
        print(f"   {record.activity_name:<20} by {record.performer_id}")

    print("== 4. serialize and verify")
    raw = serialize_seal(sealed)
    report = verify_seal(parse_seal(raw), anchors, registry)
    print(f"   {len(raw)} bytes, verification ok={report.ok}, "
          f"role={report.translator_role!r}")

    print("== 5. one-byte tamper is detected")
    doctored = raw.replace(b"Berlin", b"Borlin", 1)
    try:
        tampered_report = verify_seal(parse_seal(doctored), anchors, registry)
    except TransealError as err:
        print(f"   rejected at parse: {err}")
    else:
        print(f"   verification ok={tampered_report.ok}, "
              f"seal signature {tampered_report.seal_signature.result}")
        assert not tampered_report.ok


if __name__ == "__main__":
    main()
