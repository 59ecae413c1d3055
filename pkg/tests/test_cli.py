"""End-to-end CLI walks with click's test runner."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from transeal.cli import main
from transeal.sealxml import parse_document, parse_seal

ATTESTATION = "Certified faithful and complete translation."


def combined(result) -> str:
    try:
        return result.output + result.stderr
    except ValueError:  # stderr not captured separately
        return result.output


@pytest.fixture()
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(main, args)
    assert result.exit_code == 0, combined(result)
    return result


def build_pki(runner):
    """keygen + ca-issue + ca-issue-attr + anchors, all through the CLI."""
    run_ok(runner, ["keygen", "root.key", "--public", "root.pub"])
    run_ok(runner, ["keygen", "erika.key"])
    run_ok(runner, ["keygen", "notary.key"])
    run_ok(
        runner,
        [
            "ca-issue", "--key", "root.key", "--subject", "Root Authority",
            "--self-signed", "--not-before", "2026-01-01T00:00:00Z",
            "--days", "3650", "-o", "root-cert.xml",
        ],
    )
    run_ok(
        runner,
        [
            "ca-issue", "--key", "root.key", "--subject", "Erika Muster",
            "--issuer-cert", "root-cert.xml", "--subject-key", "erika.key",
            "--not-before", "2026-01-01T00:00:00Z", "--days", "365", "--qc",
            "-o", "erika-cert.xml",
        ],
    )
    run_ok(
        runner,
        [
            "ca-issue", "--key", "root.key", "--subject", "Notary N",
            "--issuer-cert", "root-cert.xml", "--subject-key", "notary.key",
            "--not-before", "2026-01-01T00:00:00Z", "--days", "365",
            "--serial", "3", "-o", "notary-cert.xml",
        ],
    )
    run_ok(
        runner,
        [
            "ca-issue-attr", "--key", "root.key", "--issuer-cert", "root-cert.xml",
            "--holder", "erika-cert.xml",
            "--attr", "role=authorised translator fr-de",
            "--attr", "authority=Root Authority",
            "--not-before", "2026-01-02T00:00:00Z", "--days", "300",
            "--serial", "4", "-o", "erika-ac.xml",
        ],
    )
    run_ok(runner, ["anchors", "root-cert.xml", "-o", "anchors.xml"])


def make_seal(runner):
    Path("bonjour.txt").write_text("Bonjour le monde")
    Path("hallo.txt").write_text("Hallo Welt")
    run_ok(
        runner,
        [
            "sign-doc", "--content", "bonjour.txt", "--key", "notary.key",
            "--cert", "notary-cert.xml", "--cert", "root-cert.xml",
            "--time", "2026-02-01T00:00:00Z", "-o", "bonjour.sdoc",
        ],
    )
    return run_ok(
        runner,
        [
            "seal", "--source", "bonjour.sdoc", "--target", "hallo.txt",
            "--source-lang", "fr", "--target-lang", "de",
            "--key", "erika.key", "--cert", "erika-cert.xml",
            "--cert", "root-cert.xml", "--attr-cert", "erika-ac.xml",
            "--anchors", "anchors.xml", "--operator", "erika",
            "--attestation", ATTESTATION, "--location", "Berlin",
            "--defect", "stamp illegible", "-o", "out.tseal",
        ],
    )


def test_full_walk_keygen_to_verify(runner):
    with runner.isolated_filesystem():
        build_pki(runner)
        sealed = make_seal(runner)
        assert "sha-256:" in sealed.output

        result = run_ok(runner, ["verify", "out.tseal", "--anchors", "anchors.xml"])
        assert "VALID" in result.output
        assert "NOT VALID" not in result.output

        as_json = run_ok(
            runner, ["verify", "out.tseal", "--anchors", "anchors.xml", "--json"]
        )
        report = json.loads(as_json.output)
        assert report["ok"] is True
        assert report["authorisation"]["role"] == "authorised translator fr-de"

        sealed_doc = parse_seal(Path("out.tseal").read_bytes())
        assert sealed_doc.seal.annotation.defects == ("stamp illegible",)


def test_verify_fails_on_tampered_seal(runner):
    with runner.isolated_filesystem():
        build_pki(runner)
        make_seal(runner)
        raw = Path("out.tseal").read_bytes()
        Path("out.tseal").write_bytes(raw.replace(b"Berlin", b"Borlin", 1))
        result = runner.invoke(main, ["verify", "out.tseal", "--anchors", "anchors.xml"])
        assert result.exit_code == 1
        assert "NOT VALID" in result.output


def test_verify_rejects_garbage_file(runner):
    with runner.isolated_filesystem():
        build_pki(runner)
        Path("junk.tseal").write_bytes(b"this is not xml at all")
        result = runner.invoke(main, ["verify", "junk.tseal", "--anchors", "anchors.xml"])
        assert result.exit_code == 2
        assert "unreadable seal" in combined(result)


def test_revocation_through_registry_file(runner):
    with runner.isolated_filesystem():
        build_pki(runner)
        make_seal(runner)
        # serial 4 is the sealer's authorisation attribute certificate
        first = run_ok(
            runner,
            [
                "ca-revoke", "--registry", "revocations.xml",
                "--issuer", "Root Authority", "--serial", "4",
                "--time", "2026-01-03T00:00:00Z",
            ],
        )
        assert "revoked" in first.output
        second = run_ok(
            runner,
            [
                "ca-revoke", "--registry", "revocations.xml",
                "--issuer", "Root Authority", "--serial", "4",
                "--time", "2026-02-03T00:00:00Z",
            ],
        )
        assert "unchanged" in second.output

        result = runner.invoke(
            main,
            [
                "verify", "out.tseal", "--anchors", "anchors.xml",
                "--revocations", "revocations.xml",
            ],
        )
        assert result.exit_code == 1


def test_unsigned_document_wrapping(runner):
    with runner.isolated_filesystem():
        Path("note.txt").write_text("unsigned source")
        result = run_ok(
            runner, ["sign-doc", "--content", "note.txt", "--unsigned", "-o", "note.sdoc"]
        )
        assert "sha-256:" in result.output
        container = parse_document(Path("note.sdoc").read_bytes())
        assert container.embedded_signatures == ()
        assert container.content.data == b"unsigned source"


def test_sign_doc_requires_key_or_unsigned(runner):
    with runner.isolated_filesystem():
        Path("note.txt").write_text("x")
        result = runner.invoke(main, ["sign-doc", "--content", "note.txt", "-o", "o.sdoc"])
        assert result.exit_code == 2


def test_seal_refuses_unauthorised_sealer(runner):
    """Without the attribute certificate the workflow must refuse to seal."""
    with runner.isolated_filesystem():
        build_pki(runner)
        Path("bonjour.txt").write_text("Bonjour")
        Path("hallo.txt").write_text("Hallo")
        run_ok(runner, ["sign-doc", "--content", "bonjour.txt", "--unsigned", "-o", "b.sdoc"])
        result = runner.invoke(
            main,
            [
                "seal", "--source", "b.sdoc", "--target", "hallo.txt",
                "--source-lang", "fr", "--target-lang", "de",
                "--key", "erika.key", "--cert", "erika-cert.xml",
                "--cert", "root-cert.xml", "--anchors", "anchors.xml",
                "--attestation", ATTESTATION, "--location", "Berlin",
                "-o", "out.tseal",
            ],
        )
        assert result.exit_code == 2
        assert "RULE_TRANSFORMATIONASSAY_CreateSignature" in combined(result)


def test_seal_supports_language_operations(runner):
    with runner.isolated_filesystem():
        build_pki(runner)
        Path("source.txt").write_text("พ.ศ. 2548")
        Path("target.txt").write_text("im Jahr 2005")
        run_ok(runner, ["sign-doc", "--content", "source.txt", "--unsigned", "-o", "s.sdoc"])
        run_ok(
            runner,
            [
                "seal", "--source", "s.sdoc", "--target", "target.txt",
                "--source-lang", "th", "--target-lang", "de",
                "--transliterate", "Thai=ISO 11940",
                "--calendar", "buddhist-gregorian-th",
                "--key", "erika.key", "--cert", "erika-cert.xml",
                "--cert", "root-cert.xml", "--attr-cert", "erika-ac.xml",
                "--anchors", "anchors.xml",
                "--attestation", ATTESTATION, "--location", "Berlin",
                "-o", "th.tseal",
            ],
        )
        sealed = parse_seal(Path("th.tseal").read_bytes())
        spec = sealed.seal.annotation.language_specification
        assert spec.transliterations == (("Thai", "ISO 11940"),)
        assert spec.calendar_conversion == "buddhist-gregorian-th"


def test_serve_rejects_bad_config(runner, tmp_path):
    config = tmp_path / "svc.json"
    config.write_text(json.dumps({"dataDir": str(tmp_path / "d")}))  # no adminToken
    result = runner.invoke(main, ["serve", "--config", str(config)])
    assert result.exit_code == 3
    assert "bad service config" in combined(result)


def test_serve_rejects_short_admin_token(runner, tmp_path):
    config = tmp_path / "svc.json"
    config.write_text(json.dumps({"dataDir": str(tmp_path / "d"), "adminToken": "abc"}))
    result = runner.invoke(main, ["serve", "--config", str(config)])
    assert result.exit_code == 3
