"""Minimal Ed25519 PKI: identity certificates, attribute certificates,
revocation and trust anchors.

The certificate format is a bespoke canonical-XML fragment, deliberately
much smaller than X.509: subject/issuer names are free-form strings,
serials are per-issuer decimal counters, and the only supported algorithm
is Ed25519.  Attribute certificates bind ``(type, value)`` attribute pairs
(such as a translator's role and the authorising court) to a holder
identity certificate.

Signature input for a certificate is the canonical byte sequence of its
XML element with the ``IssuerSignature`` child removed.
"""

from __future__ import annotations

import os
import threading
import warnings
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Literal, Sequence

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .errors import (
    AlreadyRevokedWarning,
    CAExpired,
    EmptyAttributes,
    HolderExpired,
    HolderRevoked,
    InvalidValidity,
    InvariantViolation,
    KeyMismatch,
    ParseError,
)
from .xmlutil import (
    NodeReader,
    XmlNode,
    b64decode_strict,
    b64encode,
    canonical_bytes,
    content_digest,
    el,
    format_timestamp,
    normalize_timestamp,
    now_utc,
    parse_timestamp,
    parse_xml,
)

ALGORITHM_ID = "ed25519"

CertificateStatus = Literal["valid", "revoked", "expired", "unknown"]
ValidationResult = Literal["valid", "invalid", "indeterminate"]

CERTIFICATE_STATUSES = ("valid", "revoked", "expired", "unknown")
VALIDATION_RESULTS = ("valid", "invalid", "indeterminate")


# ---------------------------------------------------------------------------
# keys
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KeyPair:
    """Ed25519 key pair; ``key_id`` is the digest of the raw public key."""

    public_key: bytes
    private_seed: bytes
    key_id: str

    def __post_init__(self) -> None:
        if len(self.public_key) != 32 or len(self.private_seed) != 32:
            raise InvariantViolation("Ed25519 keys are 32 raw bytes")

    def __repr__(self) -> str:  # never expose the seed
        return f"KeyPair(key_id={self.key_id!r})"


def generate_key_pair() -> KeyPair:
    return key_pair_from_seed(os.urandom(32))


def key_pair_from_seed(seed: bytes) -> KeyPair:
    private = Ed25519PrivateKey.from_private_bytes(seed)
    public = private.public_key().public_bytes_raw()
    return KeyPair(public_key=public, private_seed=seed, key_id=content_digest(public))


def sign_bytes(key_pair: KeyPair, payload: bytes) -> bytes:
    return Ed25519PrivateKey.from_private_bytes(key_pair.private_seed).sign(payload)


def verify_bytes(public_key: bytes, signature: bytes, payload: bytes) -> bool:
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, payload)
        return True
    except (InvalidSignature, ValueError):
        return False


# --- key files: one-line base64 of the 32-byte seed -------------------------

def write_key_file(path, key_pair: KeyPair) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(b64encode(key_pair.private_seed) + "\n")


def read_key_file(path) -> KeyPair:
    with open(path, "r", encoding="ascii") as fh:
        line = fh.readline().strip()
    seed = b64decode_strict(line, path=str(path))
    if len(seed) != 32:
        raise ParseError(f"key file {path}: expected 32-byte seed")
    return key_pair_from_seed(seed)


def write_public_key_file(path, key_pair: KeyPair) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{ALGORITHM_ID} {b64encode(key_pair.public_key)} {key_pair.key_id}\n")


def read_public_key_file(path) -> bytes:
    with open(path, "r", encoding="ascii") as fh:
        parts = fh.readline().split()
    if len(parts) < 2 or parts[0] != ALGORITHM_ID:
        raise ParseError(f"public key file {path}: unrecognized format")
    return b64decode_strict(parts[1], path=str(path))


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Identity certificate binding a subject name to an Ed25519 key."""

    subject: str
    issuer: str
    serial: str
    public_key: bytes
    not_before: datetime
    not_after: datetime
    qc_statement: bool
    issuer_signature: bytes

    def __post_init__(self) -> None:
        if not self.subject or not self.issuer:
            raise InvariantViolation("certificate subject/issuer must be non-empty")
        if not self.serial.isdigit():
            raise InvariantViolation("certificate serial must be a decimal string")
        if len(self.public_key) != 32:
            raise InvariantViolation("certificate public key must be 32 raw bytes")
        if self.not_before >= self.not_after:
            raise InvariantViolation("certificate validity window is empty")

    @property
    def identity(self) -> tuple[str, str]:
        """(issuer, serial) — the unique handle used by revocation entries."""
        return (self.issuer, self.serial)

    def is_self_signed(self) -> bool:
        return self.subject == self.issuer and verify_bytes(
            self.public_key, self.issuer_signature, certificate_signing_input(self)
        )


@dataclass(frozen=True)
class AttributeCertificate:
    """Attribute certificate binding (type, value) pairs to a holder cert."""

    issuer: str
    serial: str
    holder_issuer: str
    holder_serial: str
    attributes: tuple[tuple[str, str], ...]
    not_before: datetime
    not_after: datetime
    issuer_signature: bytes

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(tuple(a) for a in self.attributes))
        if not self.attributes:
            raise EmptyAttributes("attribute certificate carries no attributes")
        if self.not_before >= self.not_after:
            raise InvariantViolation("attribute certificate validity window is empty")

    @property
    def identity(self) -> tuple[str, str]:
        return (self.issuer, self.serial)

    def attribute(self, attr_type: str) -> str | None:
        for a_type, a_value in self.attributes:
            if a_type == attr_type:
                return a_value
        return None


# --- report-side data (what gets copied into annotations) ------------------

@dataclass(frozen=True)
class CertificateData:
    """Certificate facts reported inside a signature report."""

    subject: str
    issuer: str
    serial: str
    not_before: datetime
    not_after: datetime
    qc_statement: bool
    certificate_status: str

    def __post_init__(self) -> None:
        if self.certificate_status not in CERTIFICATE_STATUSES:
            raise InvariantViolation(
                f"unknown certificate status {self.certificate_status!r}"
            )
        if self.not_before >= self.not_after:
            raise InvariantViolation("certificate validity window is empty")


@dataclass(frozen=True)
class AttributeCertificateData:
    """Attribute-certificate facts reported inside a signature report."""

    issuer: str
    attributes: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", tuple(tuple(a) for a in self.attributes))
        if not self.attributes:
            raise InvariantViolation("attribute report carries no attributes")

    def attribute(self, attr_type: str) -> str | None:
        for a_type, a_value in self.attributes:
            if a_type == attr_type:
                return a_value
        return None


def certificate_data(cert: Certificate, status: str) -> CertificateData:
    return CertificateData(
        subject=cert.subject,
        issuer=cert.issuer,
        serial=cert.serial,
        not_before=cert.not_before,
        not_after=cert.not_after,
        qc_statement=cert.qc_statement,
        certificate_status=status,
    )


def attribute_certificate_data(ac: AttributeCertificate) -> AttributeCertificateData:
    return AttributeCertificateData(issuer=ac.issuer, attributes=ac.attributes)


# ---------------------------------------------------------------------------
# embedded signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddedSignature:
    """A detached signature plus the credentials needed to verify it.

    The Ed25519 payload is defined by the containing structure (document
    content subtree, seal subtree, activity record); the signature element
    itself only transports value, metadata and certificates.
    """

    signature_value: bytes
    algorithm_id: str
    signing_time: datetime
    time_source: str | None
    certificate_chain: tuple[Certificate, ...]
    attribute_certificates: tuple[AttributeCertificate, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "certificate_chain", tuple(self.certificate_chain))
        object.__setattr__(
            self, "attribute_certificates", tuple(self.attribute_certificates)
        )
        if not self.certificate_chain:
            raise InvariantViolation("signature carries an empty certificate chain")

    @property
    def signer_certificate(self) -> Certificate:
        return self.certificate_chain[0]


@dataclass(frozen=True)
class ValidationOutcome:
    """Result of verifying one embedded signature."""

    result: str  # valid | invalid | indeterminate
    path_report: tuple[CertificateData, ...]
    attr_report: tuple[AttributeCertificateData, ...]
    detail: str = ""

    def __post_init__(self) -> None:
        if self.result not in VALIDATION_RESULTS:
            raise InvariantViolation(f"unknown validation result {self.result!r}")


# ---------------------------------------------------------------------------
# revocation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RevocationEntry:
    issuer: str
    serial: str
    revocation_time: datetime


class RevocationRegistry:
    """Append-only, time-stamped revocation list.

    Status queries are answered *as of* a given time: a certificate revoked
    at ``t`` is unrevoked for queries before ``t`` and revoked from ``t``
    on.  A single writer appends; concurrent readers see consistent
    snapshots.
    """

    def __init__(self, entries: Iterable[RevocationEntry] = ()):
        self._entries: list[RevocationEntry] = list(entries)
        self._lock = threading.RLock()

    def revoke(self, issuer: str, serial: str, revocation_time: datetime) -> bool:
        """Record a revocation; returns False (with a warning) if already revoked."""
        revocation_time = normalize_timestamp(revocation_time)
        with self._lock:
            if self.revocation_time(issuer, serial) is not None:
                warnings.warn(
                    f"certificate ({issuer!r}, {serial}) is already revoked",
                    AlreadyRevokedWarning,
                    stacklevel=2,
                )
                return False
            self._entries.append(RevocationEntry(issuer, serial, revocation_time))
            return True

    def revocation_time(self, issuer: str, serial: str) -> datetime | None:
        with self._lock:
            for entry in self._entries:
                if entry.issuer == issuer and entry.serial == serial:
                    return entry.revocation_time
        return None

    def is_revoked(self, issuer: str, serial: str, at_time: datetime) -> bool:
        revoked_at = self.revocation_time(issuer, serial)
        return revoked_at is not None and revoked_at <= normalize_timestamp(at_time)

    def entries(self) -> tuple[RevocationEntry, ...]:
        with self._lock:
            return tuple(self._entries)


def certificate_status(
    cert: Certificate, registry: RevocationRegistry, at_time: datetime
) -> str:
    """Status of a certificate at a point in time; revocation wins.

    The reportable status set is closed, so a not-yet-valid certificate is
    reported as ``expired`` (outside its validity window) as well.
    """
    at_time = normalize_timestamp(at_time)
    if registry.is_revoked(cert.issuer, cert.serial, at_time):
        return "revoked"
    if at_time < cert.not_before or at_time > cert.not_after:
        return "expired"
    return "valid"


# ---------------------------------------------------------------------------
# trust anchors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrustAnchors:
    """Self-signed root certificates that terminate trust paths."""

    certificates: tuple[Certificate, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "certificates", tuple(self.certificates))
        for cert in self.certificates:
            if not cert.is_self_signed():
                raise InvariantViolation(
                    f"trust anchor {cert.subject!r} is not a valid self-signed root"
                )

    def contains(self, cert: Certificate) -> bool:
        return cert in self.certificates

    def find_subject(self, subject: str) -> Certificate | None:
        for cert in self.certificates:
            if cert.subject == subject:
                return cert
        return None


# ---------------------------------------------------------------------------
# certificate authority
# ---------------------------------------------------------------------------

class CertificateAuthority:
    """An issuing key plus its own certificate and a serial counter."""

    def __init__(
        self,
        key_pair: KeyPair,
        certificate: Certificate,
        next_serial: int | None = None,
    ):
        if certificate.public_key != key_pair.public_key:
            raise KeyMismatch("CA certificate does not match the CA key")
        self.key_pair = key_pair
        self.certificate = certificate
        self._next_serial = (
            next_serial if next_serial is not None else int(certificate.serial) + 1
        )
        self._lock = threading.Lock()

    @classmethod
    def create_root(
        cls,
        subject: str,
        key_pair: KeyPair,
        not_before: datetime,
        not_after: datetime,
        *,
        qc: bool = False,
    ) -> "CertificateAuthority":
        """Create a self-signed root CA with serial 1."""
        not_before = normalize_timestamp(not_before)
        not_after = normalize_timestamp(not_after)
        if not_before >= not_after:
            raise InvalidValidity("notBefore must precede notAfter")
        body = Certificate(
            subject=subject,
            issuer=subject,
            serial="1",
            public_key=key_pair.public_key,
            not_before=not_before,
            not_after=not_after,
            qc_statement=qc,
            issuer_signature=b"\0" * 64,
        )
        signature = sign_bytes(key_pair, certificate_signing_input(body))
        root = _with_signature(body, signature)
        return cls(key_pair, root, next_serial=2)

    def _allocate_serial(self) -> str:
        with self._lock:
            serial = self._next_serial
            self._next_serial += 1
        return str(serial)

    @property
    def next_serial(self) -> int:
        with self._lock:
            return self._next_serial

    def _check_active(self, now: datetime) -> None:
        if not (self.certificate.not_before <= now <= self.certificate.not_after):
            raise CAExpired(
                f"CA certificate {self.certificate.subject!r} is not valid at "
                f"{format_timestamp(now)}"
            )

    def issue_certificate(
        self,
        subject: str,
        subject_public_key: bytes,
        not_before: datetime,
        not_after: datetime,
        *,
        qc: bool = False,
        now: datetime | None = None,
    ) -> Certificate:
        now = normalize_timestamp(now) if now else now_utc()
        not_before = normalize_timestamp(not_before)
        not_after = normalize_timestamp(not_after)
        if not_before >= not_after:
            raise InvalidValidity("notBefore must precede notAfter")
        if (
            not_before < self.certificate.not_before
            or not_after > self.certificate.not_after
        ):
            raise InvalidValidity(
                "subject validity must lie within the issuer's own window"
            )
        self._check_active(now)
        body = Certificate(
            subject=subject,
            issuer=self.certificate.subject,
            serial=self._allocate_serial(),
            public_key=subject_public_key,
            not_before=not_before,
            not_after=not_after,
            qc_statement=qc,
            issuer_signature=b"\0" * 64,
        )
        signature = sign_bytes(self.key_pair, certificate_signing_input(body))
        return _with_signature(body, signature)

    def issue_attribute_certificate(
        self,
        holder: Certificate,
        attributes: Sequence[tuple[str, str]],
        not_before: datetime,
        not_after: datetime,
        *,
        registry: RevocationRegistry,
        now: datetime | None = None,
    ) -> AttributeCertificate:
        now = normalize_timestamp(now) if now else now_utc()
        not_before = normalize_timestamp(not_before)
        not_after = normalize_timestamp(not_after)
        if not_before >= not_after:
            raise InvalidValidity("notBefore must precede notAfter")
        if not attributes:
            raise EmptyAttributes("attribute certificate needs at least one attribute")
        self._check_active(now)
        if registry.is_revoked(holder.issuer, holder.serial, now):
            raise HolderRevoked(f"holder certificate {holder.subject!r} is revoked")
        if not (holder.not_before <= now <= holder.not_after):
            raise HolderExpired(f"holder certificate {holder.subject!r} is not valid")
        body = AttributeCertificate(
            issuer=self.certificate.subject,
            serial=self._allocate_serial(),
            holder_issuer=holder.issuer,
            holder_serial=holder.serial,
            attributes=tuple(attributes),
            not_before=not_before,
            not_after=not_after,
            issuer_signature=b"\0" * 64,
        )
        signature = sign_bytes(
            self.key_pair, attribute_certificate_signing_input(body)
        )
        return _with_ac_signature(body, signature)


def _with_signature(body: Certificate, signature: bytes) -> Certificate:
    return Certificate(
        subject=body.subject,
        issuer=body.issuer,
        serial=body.serial,
        public_key=body.public_key,
        not_before=body.not_before,
        not_after=body.not_after,
        qc_statement=body.qc_statement,
        issuer_signature=signature,
    )


def _with_ac_signature(
    body: AttributeCertificate, signature: bytes
) -> AttributeCertificate:
    return AttributeCertificate(
        issuer=body.issuer,
        serial=body.serial,
        holder_issuer=body.holder_issuer,
        holder_serial=body.holder_serial,
        attributes=body.attributes,
        not_before=body.not_before,
        not_after=body.not_after,
        issuer_signature=signature,
    )


# ---------------------------------------------------------------------------
# signing / verification of embedded signatures
# ---------------------------------------------------------------------------

def sign(
    payload: bytes,
    key_pair: KeyPair,
    certificate_chain: Sequence[Certificate],
    attribute_certificates: Sequence[AttributeCertificate] = (),
    *,
    signing_time: datetime | None = None,
    time_source: str | None = None,
) -> EmbeddedSignature:
    """Sign ``payload`` and package the result with its credentials."""
    chain = tuple(certificate_chain)
    if not chain:
        raise InvariantViolation("cannot sign without a certificate chain")
    if chain[0].public_key != key_pair.public_key:
        raise KeyMismatch("signing key does not match the leaf certificate")
    signing_time = (
        normalize_timestamp(signing_time) if signing_time else now_utc()
    )
    return EmbeddedSignature(
        signature_value=sign_bytes(key_pair, payload),
        algorithm_id=ALGORITHM_ID,
        signing_time=signing_time,
        time_source=time_source,
        certificate_chain=chain,
        attribute_certificates=tuple(attribute_certificates),
    )


def _chain_crypto_ok(payload: bytes, signature: EmbeddedSignature) -> tuple[bool, str]:
    if signature.algorithm_id != ALGORITHM_ID:
        return False, f"unsupported algorithm {signature.algorithm_id!r}"
    chain = signature.certificate_chain
    if not verify_bytes(chain[0].public_key, signature.signature_value, payload):
        return False, "signature value does not verify under the signer key"
    for lower, upper in zip(chain, chain[1:]):
        if lower.issuer != upper.subject:
            return False, f"broken chain link between {lower.subject!r} and {upper.subject!r}"
        if not verify_bytes(
            upper.public_key, lower.issuer_signature, certificate_signing_input(lower)
        ):
            return False, f"certificate {lower.subject!r} fails issuer signature check"
    root = chain[-1]
    if not root.is_self_signed():
        return False, "chain does not terminate in a self-signed root"
    return True, ""


def _ac_integrity(
    ac: AttributeCertificate,
    anchors: TrustAnchors,
    extra_certs: Sequence[Certificate] = (),
) -> tuple[bool, str]:
    issuer_cert = anchors.find_subject(ac.issuer)
    if issuer_cert is None:
        for cert in extra_certs:
            if cert.subject == ac.issuer:
                issuer_cert = cert
                break
    if issuer_cert is None:
        return False, f"attribute certificate issuer {ac.issuer!r} not resolvable"
    if not verify_bytes(
        issuer_cert.public_key,
        ac.issuer_signature,
        attribute_certificate_signing_input(ac),
    ):
        return False, "attribute certificate fails issuer signature check"
    return True, ""


def verify_signature(
    payload: bytes,
    signature: EmbeddedSignature,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    at_time: datetime,
) -> ValidationOutcome:
    """Full verification of one embedded signature as of ``at_time``.

    * ``valid`` — the cryptographic check passes, every chain certificate is
      inside its validity window, unrevoked at ``at_time`` and the chain
      terminates at a trust anchor; attached attribute certificates are
      intact.
    * ``indeterminate`` — the chain does not reach any configured anchor;
      certificate statuses are reported as ``unknown``.
    * ``invalid`` — anything else.

    Attribute-certificate *integrity* (resolvable issuer, good signature)
    participates in the result; their validity window and revocation are
    authorisation concerns evaluated separately.
    """
    at_time = normalize_timestamp(at_time)
    chain = signature.certificate_chain
    anchored = anchors.contains(chain[-1])
    if anchored:
        statuses = [certificate_status(c, registry, at_time) for c in chain]
    else:
        statuses = ["unknown"] * len(chain)
    path_report = tuple(
        certificate_data(cert, status) for cert, status in zip(chain, statuses)
    )
    attr_report = tuple(
        attribute_certificate_data(ac) for ac in signature.attribute_certificates
    )

    crypto_ok, detail = _chain_crypto_ok(payload, signature)
    if not crypto_ok:
        return ValidationOutcome("invalid", path_report, attr_report, detail)
    if not anchored:
        return ValidationOutcome(
            "indeterminate",
            path_report,
            attr_report,
            f"chain root {chain[-1].subject!r} is not a configured trust anchor",
        )
    for cert, status in zip(chain, statuses):
        if status != "valid":
            return ValidationOutcome(
                "invalid", path_report, attr_report,
                f"certificate {cert.subject!r} has status {status} at "
                f"{format_timestamp(at_time)}",
            )
    for ac in signature.attribute_certificates:
        ok, detail = _ac_integrity(ac, anchors, chain)
        if not ok:
            return ValidationOutcome("invalid", path_report, attr_report, detail)
    return ValidationOutcome("valid", path_report, attr_report)


def verify_attribute_certificate(
    ac: AttributeCertificate,
    anchors: TrustAnchors,
    registry: RevocationRegistry,
    at_time: datetime,
    extra_certs: Sequence[Certificate] = (),
) -> tuple[str, str]:
    """Status of an attribute certificate at ``at_time``: (status, detail).

    ``valid`` requires integrity, an unexpired validity window and no
    revocation as of ``at_time``; unresolvable issuers yield ``unknown``.
    """
    at_time = normalize_timestamp(at_time)
    ok, detail = _ac_integrity(ac, anchors, extra_certs)
    if not ok:
        if "not resolvable" in detail:
            return "unknown", detail
        return "invalid", detail
    if registry.is_revoked(ac.issuer, ac.serial, at_time):
        return "revoked", (
            f"attribute certificate revoked at "
            f"{format_timestamp(registry.revocation_time(ac.issuer, ac.serial))}"
        )
    if not (ac.not_before <= at_time <= ac.not_after):
        return "expired", "attribute certificate outside its validity window"
    return "valid", ""


# ---------------------------------------------------------------------------
# canonical XML for certificates, anchors and revocation lists
# ---------------------------------------------------------------------------

def certificate_to_node(cert: Certificate) -> XmlNode:
    return el(
        "Certificate",
        el("Subject", text=cert.subject),
        el("Issuer", text=cert.issuer),
        el("Serial", text=cert.serial),
        el("PublicKey", text=b64encode(cert.public_key)),
        el(
            "ValidityPeriod",
            el("NotBefore", text=format_timestamp(cert.not_before)),
            el("NotAfter", text=format_timestamp(cert.not_after)),
        ),
        el("QCStatement", text="true" if cert.qc_statement else "false"),
        el("IssuerSignature", text=b64encode(cert.issuer_signature)),
    )


def certificate_signing_input(cert: Certificate) -> bytes:
    node = certificate_to_node(cert)
    node.children = [c for c in node.children if c.tag != "IssuerSignature"]
    return canonical_bytes(node)


def _parse_bool(text: str, *, path: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise ParseError(f"expected 'true' or 'false' in {path}, found {text!r}")


def certificate_from_node(node: XmlNode, *, path: str = "Certificate") -> Certificate:
    r = NodeReader(node, expect="Certificate", path=path)
    r.check_attrs()
    subject = r.text("Subject")
    issuer = r.text("Issuer")
    serial = r.text("Serial")
    public_key = b64decode_strict(r.text("PublicKey"), path=f"{path}/PublicKey")
    vp = r.child("ValidityPeriod")
    not_before = parse_timestamp(vp.text("NotBefore"), path=f"{path}/NotBefore")
    not_after = parse_timestamp(vp.text("NotAfter"), path=f"{path}/NotAfter")
    vp.finish()
    qc = _parse_bool(r.text("QCStatement"), path=f"{path}/QCStatement")
    sig = b64decode_strict(r.text("IssuerSignature"), path=f"{path}/IssuerSignature")
    r.finish()
    try:
        return Certificate(
            subject=subject,
            issuer=issuer,
            serial=serial,
            public_key=public_key,
            not_before=not_before,
            not_after=not_after,
            qc_statement=qc,
            issuer_signature=sig,
        )
    except InvariantViolation as exc:
        raise ParseError(f"{path}: {exc}") from None


def attribute_certificate_to_node(ac: AttributeCertificate) -> XmlNode:
    attr_nodes = [
        el("Attribute", el("Type", text=a_type), el("Value", text=a_value))
        for a_type, a_value in ac.attributes
    ]
    return el(
        "AttributeCertificate",
        el("Issuer", text=ac.issuer),
        el("Serial", text=ac.serial),
        el(
            "Holder",
            el("Issuer", text=ac.holder_issuer),
            el("Serial", text=ac.holder_serial),
        ),
        *attr_nodes,
        el(
            "ValidityPeriod",
            el("NotBefore", text=format_timestamp(ac.not_before)),
            el("NotAfter", text=format_timestamp(ac.not_after)),
        ),
        el("IssuerSignature", text=b64encode(ac.issuer_signature)),
    )


def attribute_certificate_signing_input(ac: AttributeCertificate) -> bytes:
    node = attribute_certificate_to_node(ac)
    node.children = [c for c in node.children if c.tag != "IssuerSignature"]
    return canonical_bytes(node)


def attribute_certificate_from_node(
    node: XmlNode, *, path: str = "AttributeCertificate"
) -> AttributeCertificate:
    r = NodeReader(node, expect="AttributeCertificate", path=path)
    r.check_attrs()
    issuer = r.text("Issuer")
    serial = r.text("Serial")
    holder = r.child("Holder")
    holder_issuer = holder.text("Issuer")
    holder_serial = holder.text("Serial")
    holder.finish()
    attributes = []
    for attr_node in r.take_all("Attribute"):
        ar = NodeReader(attr_node, path=f"{path}/Attribute")
        attributes.append((ar.text("Type"), ar.text("Value")))
        ar.finish()
    vp = r.child("ValidityPeriod")
    not_before = parse_timestamp(vp.text("NotBefore"), path=f"{path}/NotBefore")
    not_after = parse_timestamp(vp.text("NotAfter"), path=f"{path}/NotAfter")
    vp.finish()
    sig = b64decode_strict(r.text("IssuerSignature"), path=f"{path}/IssuerSignature")
    r.finish()
    try:
        return AttributeCertificate(
            issuer=issuer,
            serial=serial,
            holder_issuer=holder_issuer,
            holder_serial=holder_serial,
            attributes=tuple(attributes),
            not_before=not_before,
            not_after=not_after,
            issuer_signature=sig,
        )
    except (InvariantViolation, EmptyAttributes) as exc:
        raise ParseError(f"{path}: {exc}") from None


# --- trust anchor / revocation files ----------------------------------------

def trust_anchors_to_bytes(anchors: TrustAnchors) -> bytes:
    return canonical_bytes(
        el("TrustAnchors", *[certificate_to_node(c) for c in anchors.certificates])
    )


def trust_anchors_from_bytes(data: bytes) -> TrustAnchors:
    root = parse_xml(data)
    r = NodeReader(root, expect="TrustAnchors")
    certs = [certificate_from_node(n, path="TrustAnchors/Certificate")
             for n in r.take_all("Certificate")]
    r.finish()
    try:
        return TrustAnchors(tuple(certs))
    except InvariantViolation as exc:
        raise ParseError(str(exc)) from None


def revocation_registry_to_bytes(registry: RevocationRegistry) -> bytes:
    entries = [
        el(
            "Revocation",
            el("Issuer", text=e.issuer),
            el("Serial", text=e.serial),
            el("Time", text=format_timestamp(e.revocation_time)),
        )
        for e in registry.entries()
    ]
    return canonical_bytes(el("RevocationRegistry", *entries))


def revocation_registry_from_bytes(data: bytes) -> RevocationRegistry:
    root = parse_xml(data)
    r = NodeReader(root, expect="RevocationRegistry")
    entries = []
    for node in r.take_all("Revocation"):
        er = NodeReader(node, path="RevocationRegistry/Revocation")
        issuer = er.text("Issuer")
        serial = er.text("Serial")
        time = parse_timestamp(er.text("Time"), path="Revocation/Time")
        er.finish()
        entries.append(RevocationEntry(issuer, serial, time))
    r.finish()
    return RevocationRegistry(entries)
