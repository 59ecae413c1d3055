"""Command-line tools: key and certificate management, sealing, verification.

Exit codes: 0 success, 1 failed verification, 2 invalid input or a value
that does not validate, 3 filesystem / configuration trouble.
"""

from __future__ import annotations

import json
import sys
from datetime import timedelta
from pathlib import Path

import click

from .errors import ParseError, TransealError
from .i18n import CALENDAR_CONVERSIONS
from .model import DocumentContent, LanguageSpecification, SignedDocumentContainer
from .pki import (
    CertificateAuthority,
    RevocationRegistry,
    TrustAnchors,
    certificate_from_node,
    certificate_to_node,
    generate_key_pair,
    read_key_file,
    revocation_registry_from_bytes,
    revocation_registry_to_bytes,
    sign,
    trust_anchors_from_bytes,
    trust_anchors_to_bytes,
    attribute_certificate_from_node,
    attribute_certificate_to_node,
    write_key_file,
    write_public_key_file,
)
from .rules import default_rule_set
from .sealxml import (
    content_signing_input,
    parse_document,
    parse_seal,
    serialize_document,
)
from .workflow import OperatorInput, SealerCredentials, run_translation_workflow, verify_seal
from .xmlutil import canonical_bytes, now_utc, parse_timestamp, parse_xml


def _fail(message: str, code: int) -> SystemExit:
    click.echo(f"error: {message}", err=True)
    return SystemExit(code)


def _read_cert(path: str):
    try:
        return certificate_from_node(parse_xml(Path(path).read_bytes()))
    except OSError as exc:
        raise _fail(f"cannot read certificate {path}: {exc}", 3)
    except TransealError as exc:
        raise _fail(f"bad certificate {path}: {exc}", 2)


def _read_registry(path: str | None) -> RevocationRegistry:
    if path is None or not Path(path).exists():
        return RevocationRegistry()
    try:
        return revocation_registry_from_bytes(Path(path).read_bytes())
    except TransealError as exc:
        raise _fail(f"bad revocation registry {path}: {exc}", 2)


def _read_anchors(path: str) -> TrustAnchors:
    try:
        return trust_anchors_from_bytes(Path(path).read_bytes())
    except OSError as exc:
        raise _fail(f"cannot read trust anchors {path}: {exc}", 3)
    except TransealError as exc:
        raise _fail(f"bad trust anchors {path}: {exc}", 2)


def _parse_time(text: str | None):
    if text is None:
        return now_utc()
    try:
        return parse_timestamp(text, path="time")
    except TransealError as exc:
        raise _fail(str(exc), 2)


@click.group()
def main() -> None:
    """Tools for sealed, authorised electronic translations."""


@main.command()
@click.argument("out", type=click.Path(dir_okay=False))
@click.option("--public", type=click.Path(dir_okay=False), help="Also write the public key here.")
def keygen(out: str, public: str | None) -> None:
    """Generate a signing key pair and write the seed file to OUT."""
    key_pair = generate_key_pair()
    write_key_file(out, key_pair)
    if public:
        write_public_key_file(public, key_pair)
    click.echo(f"key {key_pair.key_id} written to {out}")


@main.command("ca-issue")
@click.option("--key", "key_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--subject", required=True)
@click.option("--self-signed", is_flag=True, help="Create a self-signed root authority.")
@click.option("--issuer-cert", type=click.Path(exists=True, dir_okay=False),
              help="Issuer certificate (omit with --self-signed).")
@click.option("--subject-key", type=click.Path(exists=True, dir_okay=False),
              help="Key file of the subject (omit with --self-signed).")
@click.option("--not-before", "nb_text", default=None, help="YYYY-MM-DDThh:mm:ssZ, default now.")
@click.option("--days", default=365, show_default=True, help="Validity in days.")
@click.option("--qc", is_flag=True, help="Mark the certificate as qualified.")
@click.option("--serial", type=int, default=None,
              help="Serial to assign; keep these unique per issuer.")
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False))
def ca_issue(key_path, subject, self_signed, issuer_cert, subject_key, nb_text, days, qc, serial, out):
    """Issue a certificate (a self-signed root or a subject certificate)."""
    key_pair = read_key_file(key_path)
    not_before = _parse_time(nb_text)
    not_after = not_before + timedelta(days=days)
    try:
        if self_signed:
            ca = CertificateAuthority.create_root(subject, key_pair, not_before, not_after)
            cert = ca.certificate
        else:
            if not issuer_cert or not subject_key:
                raise _fail("--issuer-cert and --subject-key are required without --self-signed", 2)
            ca = CertificateAuthority(key_pair, _read_cert(issuer_cert), next_serial=serial)
            subject_pair = read_key_file(subject_key)
            cert = ca.issue_certificate(
                subject, subject_pair.public_key, not_before, not_after, qc=qc
            )
    except TransealError as exc:
        raise _fail(str(exc), 2)
    Path(out).write_bytes(canonical_bytes(certificate_to_node(cert)))
    click.echo(f"certificate {cert.serial} for {cert.subject!r} written to {out}")


@main.command("ca-issue-attr")
@click.option("--key", "key_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--issuer-cert", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--holder", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Certificate of the holder.")
@click.option("--attr", "attrs", multiple=True, required=True,
              help="type=value, e.g. --attr 'role=authorised translator fr-de'.")
@click.option("--not-before", "nb_text", default=None)
@click.option("--days", default=365, show_default=True)
@click.option("--revocations", type=click.Path(dir_okay=False),
              help="Registry consulted for the holder's status.")
@click.option("--serial", type=int, default=None,
              help="Serial to assign; keep these unique per issuer.")
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False))
def ca_issue_attr(key_path, issuer_cert, holder, attrs, nb_text, days, revocations, serial, out):
    """Issue an attribute certificate granting e.g. a translation role."""
    key_pair = read_key_file(key_path)
    ca = CertificateAuthority(key_pair, _read_cert(issuer_cert), next_serial=serial)
    holder_cert = _read_cert(holder)
    pairs = []
    for item in attrs:
        attr_type, sep, value = item.partition("=")
        if not sep or not attr_type:
            raise _fail(f"attribute {item!r} must look like type=value", 2)
        pairs.append((attr_type, value))
    not_before = _parse_time(nb_text)
    registry = _read_registry(revocations)
    try:
        ac = ca.issue_attribute_certificate(
            holder_cert,
            tuple(pairs),
            not_before,
            not_before + timedelta(days=days),
            registry=registry,
        )
    except TransealError as exc:
        raise _fail(str(exc), 2)
    Path(out).write_bytes(canonical_bytes(attribute_certificate_to_node(ac)))
    click.echo(f"attribute certificate {ac.serial} written to {out}")


@main.command()
@click.argument("certs", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False))
def anchors(certs, out):
    """Bundle self-signed root certificates into a trust anchors file."""
    try:
        bundle = TrustAnchors(tuple(_read_cert(path) for path in certs))
    except TransealError as exc:
        raise _fail(str(exc), 2)
    Path(out).write_bytes(trust_anchors_to_bytes(bundle))
    click.echo(f"{len(certs)} anchor(s) written to {out}")


@main.command("ca-revoke")
@click.option("--registry", "registry_path", required=True, type=click.Path(dir_okay=False))
@click.option("--issuer", required=True)
@click.option("--serial", required=True)
@click.option("--time", "time_text", default=None, help="Revocation time, default now.")
def ca_revoke(registry_path, issuer, serial, time_text):
    """Add a revocation to a registry file (created if absent)."""
    import warnings

    from .pki import AlreadyRevokedWarning

    registry = _read_registry(registry_path)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AlreadyRevokedWarning)
        fresh = registry.revoke(issuer, serial, _parse_time(time_text))
    Path(registry_path).write_bytes(revocation_registry_to_bytes(registry))
    click.echo("revoked" if fresh else "already revoked; registry unchanged")


@main.command("sign-doc")
@click.option("--content", "content_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "format_id", default="text/plain;charset=utf-8", show_default=True)
@click.option("--key", "key_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cert", "cert_paths", multiple=True, type=click.Path(exists=True, dir_okay=False),
              help="Signer chain, leaf first; repeatable.")
@click.option("--time", "time_text", default=None)
@click.option("--unsigned", is_flag=True, help="Wrap the content without any signature.")
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False))
def sign_doc(content_path, format_id, key_path, cert_paths, time_text, unsigned, out):
    """Wrap a file as a signed source document."""
    data = Path(content_path).read_bytes()
    try:
        content = DocumentContent.create(data, format_id)
        if unsigned:
            container = SignedDocumentContainer(content)
        else:
            if not key_path or not cert_paths:
                raise _fail("--key and --cert are required unless --unsigned", 2)
            key_pair = read_key_file(key_path)
            chain = tuple(_read_cert(p) for p in cert_paths)
            signature = sign(
                content_signing_input(content), key_pair, chain,
                signing_time=_parse_time(time_text),
            )
            container = SignedDocumentContainer(content, (signature,))
    except TransealError as exc:
        raise _fail(str(exc), 2)
    Path(out).write_bytes(serialize_document(container))
    click.echo(f"{content.content_id} written to {out}")


@main.command()
@click.option("--source", "source_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Source document (.sdoc).")
@click.option("--target", "target_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="The translated content.")
@click.option("--target-format", default="text/plain;charset=utf-8", show_default=True)
@click.option("--source-lang", required=True)
@click.option("--target-lang", required=True)
@click.option("--transliterate", "transliterations", multiple=True,
              help="script=standard, e.g. Cyrillic=ISO 9; repeatable.")
@click.option("--calendar", "calendar_label", default=None,
              help=f"One of: {', '.join(sorted(CALENDAR_CONVERSIONS))}.")
@click.option("--key", "key_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cert", "cert_paths", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False), help="Sealer chain, leaf first.")
@click.option("--attr-cert", "ac_path", type=click.Path(exists=True, dir_okay=False),
              help="The sealer's authorisation attribute certificate.")
@click.option("--anchors", "anchors_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--revocations", "revocations_path", type=click.Path(dir_okay=False))
@click.option("--operator", default="translator", show_default=True)
@click.option("--attestation", required=True, help="The accuracy attestation sentence.")
@click.option("--location", required=True, help="Place of sealing.")
@click.option("--defect", "defects", multiple=True, help="A noted defect; repeatable.")
@click.option("--comment", "comments", default=None)
@click.option("-o", "--out", required=True, type=click.Path(dir_okay=False))
def seal(source_path, target_path, target_format, source_lang, target_lang,
         transliterations, calendar_label, key_path, cert_paths, ac_path,
         anchors_path, revocations_path, operator, attestation, location,
         defects, comments, out):
    """Run the five-phase workflow and write the sealed translation."""
    try:
        source = parse_document(Path(source_path).read_bytes())
    except TransealError as exc:
        raise _fail(f"bad source document: {exc}", 2)
    translit_pairs = []
    for item in transliterations:
        script, sep, standard = item.partition("=")
        if not sep:
            raise _fail(f"transliteration {item!r} must look like script=standard", 2)
        translit_pairs.append((script, standard))
    if calendar_label is not None and calendar_label not in CALENDAR_CONVERSIONS:
        raise _fail(f"unknown calendar conversion {calendar_label!r}", 2)
    try:
        spec = LanguageSpecification(
            source_language=source_lang,
            target_language=target_lang,
            transliterations=tuple(translit_pairs),
            calendar_conversion=calendar_label,
        )
        target = DocumentContent.create(Path(target_path).read_bytes(), target_format)
        sealer = SealerCredentials(
            key_pair=read_key_file(key_path),
            certificate_chain=tuple(_read_cert(p) for p in cert_paths),
            attribute_certificate=(
                attribute_certificate_from_node(parse_xml(Path(ac_path).read_bytes()))
                if ac_path
                else None
            ),
        )
        operator_input = OperatorInput(
            source_format=source.content.format_id,
            target_format=target_format,
            language_specification=spec,
            target_content=target,
            defects=tuple(defects),
            comments=comments,
            accuracy_attestation=attestation,
            sealing_location=location,
            conversion_assay_confirmed=True,
        )
        sealed = run_translation_workflow(
            source,
            operator_input,
            default_rule_set(),
            sealer,
            _read_anchors(anchors_path),
            _read_registry(revocations_path),
            operator_name=operator,
        )
    except TransealError as exc:
        raise _fail(str(exc), 2)
    from .sealxml import serialize_seal

    Path(out).write_bytes(serialize_seal(sealed))
    click.echo(f"sealed translation {sealed.seal.target_digest} written to {out}")


@main.command()
@click.argument("tseal", type=click.Path(exists=True, dir_okay=False))
@click.option("--anchors", "anchors_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--revocations", "revocations_path", type=click.Path(dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Print the full report as JSON.")
def verify(tseal, anchors_path, revocations_path, as_json):
    """Verify a sealed translation; exit 0 only if every check passes."""
    try:
        sealed = parse_seal(Path(tseal).read_bytes())
    except TransealError as exc:
        click.echo(f"unreadable seal: {exc}", err=True)
        raise SystemExit(2)
    report = verify_seal(sealed, _read_anchors(anchors_path), _read_registry(revocations_path))
    if as_json:
        click.echo(json.dumps(report.to_json_dict(), indent=2))
    else:
        click.echo(f"seal signature: {report.seal_signature.result}")
        click.echo(f"bindings:       {'ok' if report.binding_ok else 'FAILED'}")
        for failure in report.binding_failures:
            click.echo(f"  - {failure}")
        click.echo(f"report chain:   {'ok' if report.report_chain_ok else 'FAILED'}")
        for failure in report.chain_failures:
            click.echo(f"  - {failure}")
        click.echo(
            f"authorisation:  {'ok' if report.authorisation_ok else 'FAILED'}"
            f" ({report.authorisation_detail})"
        )
        click.echo(f"overall:        {'VALID' if report.ok else 'NOT VALID'}")
    raise SystemExit(0 if report.ok else 1)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
def serve(config_path):
    """Run the sealing service; --config points at a JSON file."""
    import uvicorn

    from .service import build_service, create_app

    try:
        raw = json.loads(Path(config_path).read_text())
        service = build_service(raw)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        click.echo(f"error: bad service config: {exc}", err=True)
        raise SystemExit(3)
    app = create_app(service)
    uvicorn.run(app, host=service.config.host, port=service.config.port, log_level="warning")


if __name__ == "__main__":
    main()
