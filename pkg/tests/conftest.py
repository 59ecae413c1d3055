from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import settings

from transeal.model import DocumentContent, LanguageSpecification, SignedDocumentContainer
from transeal.pki import (
    AttributeCertificate,
    Certificate,
    CertificateAuthority,
    KeyPair,
    RevocationRegistry,
    TrustAnchors,
    key_pair_from_seed,
    sign,
)
from transeal.rules import RuleSet, default_rule_set
from transeal.sealxml import content_signing_input
from transeal.workflow import OperatorInput, SealerCredentials

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")

TEXT_FORMAT = "text/plain;charset=utf-8"

NOT_BEFORE = datetime(2026, 1, 1, tzinfo=timezone.utc)
NOT_AFTER = datetime(2031, 1, 1, tzinfo=timezone.utc)
SEALING_DAY = datetime(2026, 3, 2, 9, 0, 0, tzinfo=timezone.utc)


def seeded_key(label: str) -> KeyPair:
    return key_pair_from_seed(hashlib.sha256(f"transeal-tests:{label}".encode()).digest())


class TickClock:
    """Deterministic clock: every reading advances by a fixed step."""

    def __init__(self, start: datetime = SEALING_DAY, step_seconds: int = 3):
        self.current = start
        self.step = timedelta(seconds=step_seconds)

    def __call__(self) -> datetime:
        value = self.current
        self.current = value + self.step
        return value


@dataclass
class PkiWorld:
    root_ca: CertificateAuthority
    court_ca: CertificateAuthority
    anchors: TrustAnchors
    registry: RevocationRegistry
    translator_key: KeyPair
    translator_cert: Certificate
    attribute_certificate: AttributeCertificate
    sealer: SealerCredentials

    def chain(self) -> tuple[Certificate, ...]:
        return (self.translator_cert, self.root_ca.certificate)

    def fresh_sealer(self, label: str, attributes=None) -> SealerCredentials:
        key = seeded_key(label)
        cert = self.root_ca.issue_certificate(
            label, key.public_key, NOT_BEFORE, NOT_AFTER, qc=True, now=NOT_BEFORE
        )
        ac = None
        if attributes is not None:
            ac = self.court_ca.issue_attribute_certificate(
                cert, attributes, NOT_BEFORE, NOT_AFTER,
                registry=self.registry, now=NOT_BEFORE,
            )
        return SealerCredentials(key, (cert, self.root_ca.certificate), ac)


def build_world(label: str = "default") -> PkiWorld:
    registry = RevocationRegistry()
    root_ca = CertificateAuthority.create_root(
        "Seal Root CA", seeded_key(f"{label}:root"), NOT_BEFORE, NOT_AFTER
    )
    court_ca = CertificateAuthority.create_root(
        "District Court", seeded_key(f"{label}:court"), NOT_BEFORE, NOT_AFTER
    )
    anchors = TrustAnchors((root_ca.certificate, court_ca.certificate))
    translator_key = seeded_key(f"{label}:translator")
    translator_cert = root_ca.issue_certificate(
        "Erika Muster", translator_key.public_key, NOT_BEFORE, NOT_AFTER,
        qc=True, now=NOT_BEFORE,
    )
    ac = court_ca.issue_attribute_certificate(
        translator_cert,
        (
            ("role", "authorised translator fr-de"),
            ("authority", "District Court"),
            ("name", "Erika Muster"),
        ),
        NOT_BEFORE,
        NOT_AFTER,
        registry=registry,
        now=NOT_BEFORE,
    )
    sealer = SealerCredentials(translator_key, (translator_cert, root_ca.certificate), ac)
    return PkiWorld(
        root_ca=root_ca,
        court_ca=court_ca,
        anchors=anchors,
        registry=registry,
        translator_key=translator_key,
        translator_cert=translator_cert,
        attribute_certificate=ac,
        sealer=sealer,
    )


@pytest.fixture
def world() -> PkiWorld:
    return build_world()


@pytest.fixture
def clock() -> TickClock:
    return TickClock()


def make_container(
    text: str = "Bonjour le monde",
    fmt: str = TEXT_FORMAT,
    *,
    world: PkiWorld | None = None,
    signer: str | None = None,
) -> SignedDocumentContainer:
    """A source document, optionally signed by a fresh certified key."""
    content = DocumentContent.create(text.encode(), fmt)
    if world is None or signer is None:
        return SignedDocumentContainer(content)
    key = seeded_key(f"signer:{signer}")
    cert = world.root_ca.issue_certificate(
        signer, key.public_key, NOT_BEFORE, NOT_AFTER, qc=True, now=NOT_BEFORE
    )
    signature = sign(
        content_signing_input(content),
        key,
        (cert, world.root_ca.certificate),
        signing_time=datetime(2026, 2, 1, tzinfo=timezone.utc),
    )
    return SignedDocumentContainer(content, (signature,))


def make_operator_input(
    target_text: str = "Hallo Welt",
    *,
    source_format: str = TEXT_FORMAT,
    target_format: str = TEXT_FORMAT,
    source_language: str = "fr",
    target_language: str = "de",
    defects: tuple[str, ...] = (),
    comments: str | None = None,
    spec: LanguageSpecification | None = None,
) -> OperatorInput:
    return OperatorInput(
        source_format=source_format,
        target_format=target_format,
        language_specification=spec
        or LanguageSpecification(source_language, target_language),
        target_content=DocumentContent.create(target_text.encode(), target_format),
        defects=defects,
        comments=comments,
        accuracy_attestation="Certified faithful and complete translation.",
        sealing_location="Berlin",
        conversion_assay_confirmed=True,
    )


@pytest.fixture
def rule_set() -> RuleSet:
    return default_rule_set()
