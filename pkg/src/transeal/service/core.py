"""Domain logic of the sealing service.

One :class:`TranslationService` owns two self-signed authorities — an
identity root that certifies translator signing keys, and a court
authority that grants (and revokes) translation roles as attribute
certificates.  Both roots are published as trust anchors so any party
can verify issued seals offline, together with the revocation registry.

Credentials are chosen by the translator at registration and only their
SHA-256 digest is stored; no API ever returns a credential or a private
key.
"""

from __future__ import annotations

import hashlib
import hmac
import logging
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Callable

from ..errors import (
    DuplicateName,
    NotFound,
    NotInDirectory,
    ParseError,
    RevokedTranslator,
    Unauthorised,
)
from ..i18n import CALENDAR_CONVERSIONS, TransliterationRegistry
from ..model import (
    DocumentContent,
    LanguageSpecification,
    SignedDocumentContainer,
)
from ..pki import (
    AttributeCertificate,
    Certificate,
    CertificateAuthority,
    KeyPair,
    RevocationRegistry,
    TrustAnchors,
    attribute_certificate_from_node,
    attribute_certificate_to_node,
    certificate_from_node,
    certificate_to_node,
    generate_key_pair,
    revocation_registry_from_bytes,
    revocation_registry_to_bytes,
    trust_anchors_to_bytes,
    verify_attribute_certificate,
)
from ..rules import RuleSet, default_rule_set
from ..sealxml import parse_document, parse_seal, serialize_seal
from ..workflow import (
    OperatorInput,
    SealerCredentials,
    TranslationWorkflow,
    verify_seal,
)
from ..xmlutil import b64decode_strict, b64encode, canonical_bytes, now_utc, parse_xml
from .store import ServiceStore

logger = logging.getLogger(__name__)

__all__ = [
    "ServiceConfig",
    "TranslatorRecord",
    "SealJob",
    "TranslationService",
    "build_service",
    "credential_digest",
]

DEFAULT_AUTHORISATION_DAYS = 365
DEFAULT_CERTIFICATE_DAYS = 3 * 365


def credential_digest(credential: str) -> str:
    return hashlib.sha256(credential.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: str
    admin_token: str
    service_name: str = "Transeal Sealing Service"
    court_name: str = "District Court"
    host: str = "127.0.0.1"
    port: int = 8431

    @classmethod
    def from_dict(cls, raw: dict) -> "ServiceConfig":
        try:
            data_dir = raw["dataDir"]
            admin_token = raw["adminToken"]
        except KeyError as missing:
            raise ValueError(f"service config is missing {missing.args[0]!r}")
        if not isinstance(data_dir, str) or not data_dir:
            raise ValueError("dataDir must be a non-empty string")
        if not isinstance(admin_token, str) or len(admin_token) < 8:
            raise ValueError("adminToken must be a string of at least 8 characters")
        return cls(
            data_dir=data_dir,
            admin_token=admin_token,
            service_name=raw.get("serviceName", cls.service_name),
            court_name=raw.get("courtName", cls.court_name),
            host=raw.get("host", cls.host),
            port=int(raw.get("port", cls.port)),
        )


@dataclass
class TranslatorRecord:
    translator_id: str
    name: str
    credential_digest: str
    certificate: Certificate
    attribute_certificate: AttributeCertificate | None = None
    language_pairs: tuple[str, ...] = ()

    def public_info(self, authorised: bool) -> dict:
        return {
            "id": self.translator_id,
            "name": self.name,
            "authorised": authorised,
            "role": (
                self.attribute_certificate.attribute("role")
                if self.attribute_certificate
                else None
            ),
            "authority": (
                self.attribute_certificate.attribute("authority")
                if self.attribute_certificate
                else None
            ),
            "languagePairs": list(self.language_pairs),
            "certificateSerial": self.certificate.serial,
        }


@dataclass
class SealJob:
    job_id: str
    translator_id: str
    flow: TranslationWorkflow
    created_at: datetime
    result: bytes | None = None
    target_digest: str | None = None

    def status(self) -> dict:
        source = self.flow.source.content
        return {
            "id": self.job_id,
            "translatorId": self.translator_id,
            "phase": self.flow.phase,
            "createdAt": self.created_at.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "sealed": self.result is not None,
            "targetDigest": self.target_digest,
            "source": {
                "format": source.format_id,
                "size": len(source.data),
                "contentId": source.content_id,
            },
            "signatures": self._signature_panel(),
        }

    def _signature_panel(self) -> list[dict]:
        """Original-signature reports, once the extraction activity has run."""
        extraction = self.flow.report().activity("SignatureExtraction")
        if extraction is None:
            return []
        return [
            {
                "result": report.signature_validation_result,
                "signer": report.signer,
                "authority": report.authority,
                "signingTime": report.signing_time.strftime("%Y-%m-%dT%H:%M:%SZ"),
                "certificates": [
                    {
                        "subject": cert.subject,
                        "issuer": cert.issuer,
                        "serial": cert.serial,
                        "status": cert.certificate_status,
                    }
                    for cert in report.certificates
                ],
                "attributeCertificates": [
                    {"issuer": ac.issuer, "attributes": dict(ac.attributes)}
                    for ac in report.attribute_certificates
                ],
            }
            for report in extraction.payload.original_signatures
        ]


@dataclass
class _CourtEntry:
    authority: str
    name: str
    entered_at: str


class TranslationService:
    """All service state and operations; thread-safe via one lock."""

    def __init__(
        self,
        store: ServiceStore,
        config: ServiceConfig,
        *,
        rule_set: RuleSet | None = None,
        clock: Callable[[], datetime] | None = None,
    ):
        self.store = store
        self.config = config
        self.clock = clock or now_utc
        self.rule_set = rule_set or default_rule_set()
        self._admin_digest = credential_digest(config.admin_token)
        self._lock = threading.RLock()
        self._jobs: dict[str, SealJob] = {}
        self._seals_issued = 0
        self._translators: dict[str, TranslatorRecord] = {}
        self._court: dict[tuple[str, str], _CourtEntry] = {}
        self.transliterations = TransliterationRegistry()
        self._load_or_init()

    # -- bootstrap ------------------------------------------------------------

    def _load_or_init(self) -> None:
        state = self.store.read_state()
        if not state:
            self._init_pki()
            return
        root_key = self.store.read_key("root-ca")
        court_key = self.store.read_key("court-ca")
        root_cert = self._read_cert("certs/root-ca.xml")
        court_cert = self._read_cert("certs/court-ca.xml")
        counters = state.get("counters", {})
        self.root_ca = CertificateAuthority(
            root_key, root_cert, next_serial=int(counters.get("root", 2))
        )
        self.court_ca = CertificateAuthority(
            court_key, court_cert, next_serial=int(counters.get("court", 2))
        )
        self.anchors = TrustAnchors((root_cert, court_cert))
        raw = self.store.read_bytes("revocations.xml")
        self.registry = (
            revocation_registry_from_bytes(raw) if raw else RevocationRegistry()
        )
        for tid, info in state.get("translators", {}).items():
            cert = self._read_cert(f"certs/{tid}.xml")
            ac = None
            ac_raw = self.store.read_bytes(f"acs/{tid}.xml")
            if ac_raw:
                ac = attribute_certificate_from_node(parse_xml(ac_raw))
            self._translators[tid] = TranslatorRecord(
                translator_id=tid,
                name=info["name"],
                credential_digest=info["credentialDigest"],
                certificate=cert,
                attribute_certificate=ac,
                language_pairs=tuple(info.get("languagePairs", ())),
            )
        for entry in state.get("court", []):
            key = (entry["authority"], entry["name"])
            self._court[key] = _CourtEntry(
                entry["authority"], entry["name"], entry["enteredAt"]
            )
        self._seals_issued = int(state.get("sealsIssued", 0))
        logger.info(
            "service restored: %d translator(s), %d court entr(ies)",
            len(self._translators),
            len(self._court),
        )

    def _init_pki(self) -> None:
        now = self.clock()
        not_after = now + timedelta(days=10 * 365)
        root_key = generate_key_pair()
        court_key = generate_key_pair()
        self.root_ca = CertificateAuthority.create_root(
            f"{self.config.service_name} Identity Root", root_key, now, not_after
        )
        self.court_ca = CertificateAuthority.create_root(
            self.config.court_name, court_key, now, not_after
        )
        self.anchors = TrustAnchors(
            (self.root_ca.certificate, self.court_ca.certificate)
        )
        self.registry = RevocationRegistry()
        self.store.write_key("root-ca", root_key)
        self.store.write_key("court-ca", court_key)
        self._write_cert("certs/root-ca.xml", self.root_ca.certificate)
        self._write_cert("certs/court-ca.xml", self.court_ca.certificate)
        self.store.write_bytes("anchors.xml", trust_anchors_to_bytes(self.anchors))
        self.store.write_bytes(
            "revocations.xml", revocation_registry_to_bytes(self.registry)
        )
        self._persist_state()
        logger.info("service initialised with fresh authorities")

    def _read_cert(self, name: str) -> Certificate:
        raw = self.store.read_bytes(name)
        if raw is None:
            raise ParseError(f"missing stored certificate {name}")
        return certificate_from_node(parse_xml(raw))

    def _write_cert(self, name: str, cert: Certificate) -> None:
        self.store.write_bytes(name, canonical_bytes(certificate_to_node(cert)))

    def _persist_state(self) -> None:
        state = {
            "serviceName": self.config.service_name,
            "courtName": self.config.court_name,
            "counters": {
                "root": self.root_ca.next_serial,
                "court": self.court_ca.next_serial,
            },
            "translators": {
                tid: {
                    "name": rec.name,
                    "credentialDigest": rec.credential_digest,
                    "languagePairs": list(rec.language_pairs),
                }
                for tid, rec in self._translators.items()
            },
            "court": [
                {
                    "authority": entry.authority,
                    "name": entry.name,
                    "enteredAt": entry.entered_at,
                }
                for entry in self._court.values()
            ],
            "sealsIssued": self._seals_issued,
        }
        self.store.write_state(state)

    def _persist_revocations(self) -> None:
        self.store.write_bytes(
            "revocations.xml", revocation_registry_to_bytes(self.registry)
        )

    # -- admin ------------------------------------------------------------------

    def check_admin(self, token: str | None) -> None:
        if token is None or not hmac.compare_digest(
            credential_digest(token), self._admin_digest
        ):
            raise Unauthorised("admin token missing or wrong")

    def enter_court_directory(self, authority: str, name: str) -> dict:
        with self._lock:
            key = (authority, name)
            entry = _CourtEntry(
                authority, name, self.clock().strftime("%Y-%m-%dT%H:%M:%SZ")
            )
            self._court[key] = entry
            self._persist_state()
        return {"authority": authority, "name": name, "enteredAt": entry.entered_at}

    def remove_from_court_directory(self, authority: str, name: str) -> None:
        with self._lock:
            if (authority, name) not in self._court:
                raise NotFound(f"{name!r} is not listed by {authority!r}")
            del self._court[(authority, name)]
            self._persist_state()

    def court_directory(self) -> list[dict]:
        with self._lock:
            return [
                {
                    "authority": e.authority,
                    "name": e.name,
                    "enteredAt": e.entered_at,
                }
                for e in self._court.values()
            ]

    # -- translators --------------------------------------------------------------

    def register_translator(self, name: str, credential: str) -> dict:
        if not name or not name.strip():
            raise ValueError("translator name must be non-empty")
        if len(credential) < 8:
            raise ValueError("credential must have at least 8 characters")
        with self._lock:
            for rec in self._translators.values():
                if rec.name == name:
                    raise DuplicateName(f"translator {name!r} already registered")
            translator_id = secrets.token_hex(8)
            key_pair = generate_key_pair()
            now = self.clock()
            cert = self.root_ca.issue_certificate(
                name,
                key_pair.public_key,
                now,
                now + timedelta(days=DEFAULT_CERTIFICATE_DAYS),
                qc=True,
                now=now,
            )
            record = TranslatorRecord(
                translator_id=translator_id,
                name=name,
                credential_digest=credential_digest(credential),
                certificate=cert,
            )
            self.store.write_key(translator_id, key_pair)
            self._write_cert(f"certs/{translator_id}.xml", cert)
            self._translators[translator_id] = record
            self._persist_state()
        logger.info("translator %s registered as %s", name, translator_id)
        return record.public_info(authorised=False)

    def _record(self, translator_id: str) -> TranslatorRecord:
        record = self._translators.get(translator_id)
        if record is None:
            raise NotFound(f"no translator {translator_id!r}")
        return record

    def authenticate(self, translator_id: str | None, credential: str | None) -> TranslatorRecord:
        if not translator_id or credential is None:
            raise Unauthorised("translator id and credential headers are required")
        with self._lock:
            record = self._translators.get(translator_id)
        if record is None or not hmac.compare_digest(
            credential_digest(credential), record.credential_digest
        ):
            raise Unauthorised("unknown translator or wrong credential")
        return record

    def is_authorised(self, record: TranslatorRecord, at_time: datetime | None = None) -> bool:
        ac = record.attribute_certificate
        if ac is None:
            return False
        status, _ = verify_attribute_certificate(
            ac,
            self.anchors,
            self.registry,
            at_time or self.clock(),
            (record.certificate,),
        )
        return status == "valid"

    def translator_info(self, translator_id: str) -> dict:
        with self._lock:
            record = self._record(translator_id)
        return record.public_info(self.is_authorised(record))

    def find_translator(self, name: str) -> dict:
        with self._lock:
            for record in self._translators.values():
                if record.name == name:
                    return record.public_info(self.is_authorised(record))
        raise NotFound(f"no translator named {name!r}")

    def authorise(
        self,
        translator_id: str,
        language_pairs: list[str],
        *,
        valid_days: int = DEFAULT_AUTHORISATION_DAYS,
    ) -> dict:
        """Issue a role attribute certificate; requires a court entry."""
        if not language_pairs:
            raise ValueError("at least one language pair is required")
        for pair in language_pairs:
            source, sep, target = pair.partition("-")
            if not sep or not source or not target:
                raise ValueError(f"language pair {pair!r} must look like 'fr-de'")
        with self._lock:
            record = self._record(translator_id)
            court_key = (self.config.court_name, record.name)
            if court_key not in self._court:
                raise NotInDirectory(
                    f"{record.name!r} has no entry in the directory of "
                    f"{self.config.court_name!r}"
                )
            role = "authorised translator " + ", ".join(language_pairs)
            now = self.clock()
            ac = self.court_ca.issue_attribute_certificate(
                record.certificate,
                (
                    ("role", role),
                    ("authority", self.config.court_name),
                    ("name", record.name),
                ),
                now,
                now + timedelta(days=valid_days),
                registry=self.registry,
                now=now,
            )
            record.attribute_certificate = ac
            record.language_pairs = tuple(language_pairs)
            self.store.write_bytes(
                f"acs/{translator_id}.xml",
                canonical_bytes(attribute_certificate_to_node(ac)),
            )
            self._persist_state()
        logger.info("translator %s authorised: %s", record.name, role)
        return record.public_info(authorised=True)

    def revoke(self, translator_id: str) -> dict:
        with self._lock:
            record = self._record(translator_id)
            ac = record.attribute_certificate
            if ac is None:
                raise RevokedTranslator(
                    f"translator {record.name!r} holds no authorisation"
                )
            when = self.clock()
            self.registry.revoke(ac.issuer, ac.serial, when)
            self._persist_revocations()
        logger.info("authorisation of %s revoked", record.name)
        return {
            "id": translator_id,
            "revokedAt": when.strftime("%Y-%m-%dT%H:%M:%SZ"),
            "serial": ac.serial,
        }

    # -- sealing ------------------------------------------------------------------

    def _sealer_credentials(self, record: TranslatorRecord) -> SealerCredentials:
        key_pair = self.store.read_key(record.translator_id)
        return SealerCredentials(
            key_pair=key_pair,
            certificate_chain=(record.certificate, self.root_ca.certificate),
            attribute_certificate=record.attribute_certificate,
        )

    def _require_authorised_for(self, record: TranslatorRecord, pair: str) -> None:
        ac = record.attribute_certificate
        if ac is None:
            raise RevokedTranslator(f"translator {record.name!r} is not authorised")
        if pair not in record.language_pairs:
            raise RevokedTranslator(
                f"translator {record.name!r} is not authorised for {pair!r}"
            )
        status, detail = verify_attribute_certificate(
            ac, self.anchors, self.registry, self.clock(), (record.certificate,)
        )
        if status != "valid":
            raise RevokedTranslator(f"authorisation is {status}: {detail}")

    def _parse_source(self, payload: dict) -> SignedDocumentContainer:
        if "sourceSdoc" in payload:
            return parse_document(
                b64decode_strict(payload["sourceSdoc"], path="sourceSdoc")
            )
        try:
            content = payload["sourceContent"]
            fmt = payload["sourceFormat"]
        except KeyError as missing:
            raise ValueError(f"request is missing {missing.args[0]!r}")
        data = b64decode_strict(content, path="sourceContent")
        return SignedDocumentContainer(DocumentContent.create(data, fmt))

    def _language_specification(self, payload: dict) -> LanguageSpecification:
        try:
            source = payload["sourceLanguage"]
            target = payload["targetLanguage"]
        except KeyError as missing:
            raise ValueError(f"request is missing {missing.args[0]!r}")
        transliterations = []
        for item in payload.get("transliterations", ()):
            script, standard = item["script"], item["standard"]
            transliterations.append((script, standard))
        label = payload.get("calendarConversion")
        if label is not None and label not in CALENDAR_CONVERSIONS:
            raise ValueError(f"unknown calendar conversion {label!r}")
        return LanguageSpecification(
            source_language=source,
            target_language=target,
            transliterations=tuple(transliterations),
            calendar_conversion=label,
        )

    def create_job(self, record: TranslatorRecord, payload: dict) -> dict:
        source = self._parse_source(payload)
        with self._lock:
            sealer = self._sealer_credentials(record)
            job_id = secrets.token_hex(8)
            flow = TranslationWorkflow(
                source,
                self.rule_set,
                sealer,
                self.anchors,
                self.registry,
                operator_name=record.name,
                component_id=f"sealing-service:{self.config.service_name}",
                clock=self.clock,
            )
            job = SealJob(
                job_id=job_id,
                translator_id=record.translator_id,
                flow=flow,
                created_at=self.clock(),
            )
            self._jobs[job_id] = job
        return job.status()

    def _job(self, job_id: str, record: TranslatorRecord) -> SealJob:
        job = self._jobs.get(job_id)
        if job is None:
            raise NotFound(f"no job {job_id!r}")
        if job.translator_id != record.translator_id:
            raise Unauthorised("job belongs to a different translator")
        return job

    def job_classify(self, record: TranslatorRecord, job_id: str, payload: dict) -> dict:
        job = self._job(job_id, record)
        spec = self._language_specification(payload)
        pair = f"{spec.source_language}-{spec.target_language}"
        self._require_authorised_for(record, pair)
        operator_input = OperatorInput(
            source_format=payload.get("sourceFormat", job.flow.source.content.format_id),
            target_format=payload.get("targetFormat", ""),
            language_specification=spec,
        )
        with self._lock:
            job.flow.classify(operator_input)
            job.flow.extract_signatures()
        return job.status()

    def job_target(self, record: TranslatorRecord, job_id: str, payload: dict) -> dict:
        job = self._job(job_id, record)
        try:
            raw = payload["targetContent"]
            fmt = payload["targetFormat"]
        except KeyError as missing:
            raise ValueError(f"request is missing {missing.args[0]!r}")
        target = DocumentContent.create(
            b64decode_strict(raw, path="targetContent"), fmt
        )
        defects = tuple(payload.get("defects", ()))
        with self._lock:
            job.flow.record_conversion(target, defects)
            job.target_digest = target.content_id
        return job.status()

    def job_assay(self, record: TranslatorRecord, job_id: str, payload: dict) -> dict:
        job = self._job(job_id, record)
        with self._lock:
            job.flow.conversion_assay(bool(payload.get("confirmed", False)))
        return job.status()

    def job_seal(self, record: TranslatorRecord, job_id: str, payload: dict) -> dict:
        job = self._job(job_id, record)
        classification = job.flow.report().activity("Classification")
        if classification is None:
            raise ValueError("job has not been classified yet")
        spec = classification.payload.language_specification
        pair = f"{spec.source_language}-{spec.target_language}"
        self._require_authorised_for(record, pair)
        operator_input = OperatorInput(
            source_format=classification.payload.source_format,
            target_format=classification.payload.target_format,
            language_specification=spec,
            defects=tuple(payload.get("defects", ())),
            comments=payload.get("comments"),
            accuracy_attestation=payload.get("attestation", ""),
            sealing_location=payload.get("location", ""),
            conversion_assay_confirmed=True,
        )
        with self._lock:
            # re-read credentials: the authorisation may have been renewed
            job.flow.sealer = self._sealer_credentials(record)
            sealed = job.flow.transformation_assay(operator_input)
            data = serialize_seal(sealed)
            job.result = data
            job.target_digest = sealed.seal.target_digest
            digest_hex = sealed.seal.target_digest.split(":", 1)[1]
            self.store.write_bytes(f"seals/{digest_hex}.tseal", data)
            self._seals_issued += 1
            self._persist_state()
        logger.info("job %s sealed by %s", job_id, record.name)
        return {**job.status(), "tseal": b64encode(data)}

    def job_status(self, record: TranslatorRecord, job_id: str) -> dict:
        return self._job(job_id, record).status()

    def job_result(self, record: TranslatorRecord, job_id: str) -> bytes:
        job = self._job(job_id, record)
        if job.result is None:
            raise NotFound(f"job {job_id!r} has no seal yet")
        return job.result

    def one_shot_seal(self, record: TranslatorRecord, payload: dict) -> dict:
        """Register, run and seal a whole translation in one request."""
        job = self.create_job(record, payload)
        job_id = job["id"]
        try:
            self.job_classify(record, job_id, payload)
            self.job_target(record, job_id, payload)
            self.job_assay(record, job_id, {"confirmed": payload.get("confirmed", True)})
            return self.job_seal(record, job_id, payload)
        finally:
            self._jobs.pop(job_id, None)

    # -- verification and published material ----------------------------------------

    def verify(self, tseal: bytes) -> dict:
        sealed = parse_seal(tseal)
        report = verify_seal(sealed, self.anchors, self.registry)
        return report.to_json_dict()

    def anchors_bytes(self) -> bytes:
        return trust_anchors_to_bytes(self.anchors)

    def revocations_bytes(self) -> bytes:
        return revocation_registry_to_bytes(self.registry)

    def health(self) -> dict:
        with self._lock:
            return {
                "status": "ok",
                "translators": len(self._translators),
                "openJobs": sum(1 for j in self._jobs.values() if j.result is None),
                "sealsIssued": self._seals_issued,
            }


def build_service(config: dict | ServiceConfig) -> TranslationService:
    if not isinstance(config, ServiceConfig):
        config = ServiceConfig.from_dict(config)
    store = ServiceStore(config.data_dir)
    return TranslationService(store, config)
