from __future__ import annotations

import warnings
from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, strategies as st

from conftest import NOT_AFTER, NOT_BEFORE, build_world, seeded_key

from transeal.errors import (
    AlreadyRevokedWarning,
    CAExpired,
    EmptyAttributes,
    HolderExpired,
    HolderRevoked,
    InvalidValidity,
    KeyMismatch,
    ParseError,
)
from transeal.pki import (
    ALGORITHM_ID,
    CertificateAuthority,
    RevocationRegistry,
    TrustAnchors,
    attribute_certificate_data,
    attribute_certificate_from_node,
    attribute_certificate_to_node,
    certificate_data,
    certificate_from_node,
    certificate_status,
    certificate_to_node,
    generate_key_pair,
    key_pair_from_seed,
    read_key_file,
    read_public_key_file,
    revocation_registry_from_bytes,
    revocation_registry_to_bytes,
    sign,
    sign_bytes,
    trust_anchors_from_bytes,
    trust_anchors_to_bytes,
    verify_attribute_certificate,
    verify_bytes,
    verify_signature,
    write_key_file,
    write_public_key_file,
)
from transeal.xmlutil import canonical_bytes, parse_xml

MID_2026 = datetime(2026, 6, 1, tzinfo=timezone.utc)


# -- keys ------------------------------------------------------------------------

def test_sign_verify_round_trip():
    key = generate_key_pair()
    signature = sign_bytes(key, b"payload")
    assert verify_bytes(key.public_key, signature, b"payload")
    assert not verify_bytes(key.public_key, signature, b"payload2")


def test_seed_derivation_is_deterministic():
    a = key_pair_from_seed(b"\x07" * 32)
    b = key_pair_from_seed(b"\x07" * 32)
    assert a.public_key == b.public_key
    assert a.key_id == b.key_id


def test_key_file_round_trip(tmp_path):
    key = generate_key_pair()
    path = tmp_path / "signer.key"
    write_key_file(path, key)
    again = read_key_file(path)
    assert again.public_key == key.public_key

    pub_path = tmp_path / "signer.pub"
    write_public_key_file(pub_path, key)
    assert read_public_key_file(pub_path) == key.public_key


def test_key_repr_hides_seed():
    key = key_pair_from_seed(b"\x42" * 32)
    assert "B" * 8 not in repr(key)
    assert key.private_seed.hex() not in repr(key)


# -- certificates -------------------------------------------------------------------

def test_root_is_self_signed_and_serial_one(world):
    root = world.root_ca.certificate
    assert root.is_self_signed()
    assert root.serial == "1"
    assert root.issuer == root.subject


def test_issued_serials_count_up(world):
    ca = world.root_ca
    first = ca.issue_certificate("A", generate_key_pair().public_key, NOT_BEFORE, NOT_AFTER)
    second = ca.issue_certificate("B", generate_key_pair().public_key, NOT_BEFORE, NOT_AFTER)
    assert int(second.serial) == int(first.serial) + 1


def test_certificate_xml_round_trip(world):
    cert = world.translator_cert
    raw = canonical_bytes(certificate_to_node(cert))
    again = certificate_from_node(parse_xml(raw))
    assert again == cert


def test_certificate_tamper_detected(world):
    cert = world.translator_cert
    raw = canonical_bytes(certificate_to_node(cert))
    tampered = raw.replace(b"Erika Muster", b"Eva Mallory")
    parsed = certificate_from_node(parse_xml(tampered))
    # the issuer signature no longer covers the subject
    outcome = verify_signature(
        b"x",
        sign(b"x", world.translator_key, (parsed, world.root_ca.certificate)),
        world.anchors,
        world.registry,
        MID_2026,
    )
    assert outcome.result == "invalid"


def test_issue_rejects_validity_outside_ca_window(world):
    with pytest.raises(InvalidValidity):
        world.root_ca.issue_certificate(
            "A", generate_key_pair().public_key, NOT_BEFORE, NOT_AFTER + timedelta(days=1)
        )


def test_issue_rejects_reversed_window(world):
    with pytest.raises(InvalidValidity):
        world.root_ca.issue_certificate(
            "A", generate_key_pair().public_key, NOT_AFTER, NOT_BEFORE
        )


def test_expired_ca_refuses_to_issue(world):
    after_end = NOT_AFTER + timedelta(days=1)
    with pytest.raises(CAExpired):
        world.root_ca.issue_certificate(
            "A", generate_key_pair().public_key, NOT_BEFORE, NOT_AFTER,
            now=after_end,
        )


def test_sign_refuses_wrong_key(world):
    stranger = generate_key_pair()
    with pytest.raises(KeyMismatch):
        sign(b"payload", stranger, world.chain())


# -- status -------------------------------------------------------------------------

def test_status_valid_inside_window(world):
    assert certificate_status(world.translator_cert, world.registry, MID_2026) == "valid"


def test_status_expired_after_window(world):
    late = NOT_AFTER + timedelta(seconds=1)
    assert certificate_status(world.translator_cert, world.registry, late) == "expired"


def test_status_expired_before_window(world):
    early = NOT_BEFORE - timedelta(seconds=1)
    assert certificate_status(world.translator_cert, world.registry, early) == "expired"


def test_status_revoked_wins_over_window(world):
    cert = world.translator_cert
    world.registry.revoke(cert.issuer, cert.serial, MID_2026)
    late = NOT_AFTER + timedelta(days=1)
    assert certificate_status(cert, world.registry, late) == "revoked"


def test_revocation_is_as_of_a_time(world):
    cert = world.translator_cert
    world.registry.revoke(cert.issuer, cert.serial, MID_2026)
    before = MID_2026 - timedelta(seconds=1)
    assert certificate_status(cert, world.registry, before) == "valid"
    assert certificate_status(cert, world.registry, MID_2026) == "revoked"


def test_double_revocation_warns_and_keeps_first_time(world):
    cert = world.translator_cert
    assert world.registry.revoke(cert.issuer, cert.serial, MID_2026) is True
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        second = world.registry.revoke(
            cert.issuer, cert.serial, MID_2026 + timedelta(days=9)
        )
    assert second is False
    assert any(issubclass(w.category, AlreadyRevokedWarning) for w in caught)
    # the original revocation instant still governs
    assert certificate_status(cert, world.registry, MID_2026) == "revoked"


@given(st.lists(st.integers(0, 3650), min_size=1, max_size=12))
def test_revocation_monotonicity_property(day_offsets):
    """Once revoked at t, the certificate is revoked at every t' >= t."""
    world = build_world("monotonic")
    cert = world.translator_cert
    revoke_at = NOT_BEFORE + timedelta(days=min(day_offsets))
    world.registry.revoke(cert.issuer, cert.serial, revoke_at)
    for offset in day_offsets:
        probe = NOT_BEFORE + timedelta(days=offset)
        status = certificate_status(cert, world.registry, probe)
        if probe >= revoke_at:
            assert status == "revoked"
        else:
            assert status != "revoked"


# -- embedded signatures ----------------------------------------------------------

def test_verify_signature_happy_path(world):
    signature = sign(b"payload", world.translator_key, world.chain(), signing_time=MID_2026)
    assert signature.algorithm_id == ALGORITHM_ID
    outcome = verify_signature(b"payload", signature, world.anchors, world.registry, MID_2026)
    assert outcome.result == "valid"
    assert [c.certificate_status for c in outcome.path_report] == ["valid", "valid"]


def test_verify_signature_wrong_payload_invalid(world):
    signature = sign(b"payload", world.translator_key, world.chain())
    outcome = verify_signature(b"other", signature, world.anchors, world.registry, MID_2026)
    assert outcome.result == "invalid"


def test_verify_signature_unanchored_root_indeterminate(world):
    lost_root = CertificateAuthority.create_root(
        "Unknown Root", seeded_key("unknown-root"), NOT_BEFORE, NOT_AFTER
    )
    key = seeded_key("unknown-holder")
    cert = lost_root.issue_certificate("Nobody", key.public_key, NOT_BEFORE, NOT_AFTER)
    signature = sign(b"payload", key, (cert, lost_root.certificate))
    outcome = verify_signature(b"payload", signature, world.anchors, world.registry, MID_2026)
    assert outcome.result == "indeterminate"
    assert [c.certificate_status for c in outcome.path_report] == ["unknown", "unknown"]


def test_verify_signature_revoked_leaf_invalid(world):
    signature = sign(b"payload", world.translator_key, world.chain())
    cert = world.translator_cert
    world.registry.revoke(cert.issuer, cert.serial, MID_2026)
    outcome = verify_signature(
        b"payload", signature, world.anchors, world.registry, MID_2026 + timedelta(days=1)
    )
    assert outcome.result == "invalid"
    statuses = [c.certificate_status for c in outcome.path_report]
    assert statuses[0] == "revoked"


def test_verify_signature_expired_at_time_invalid(world):
    signature = sign(b"payload", world.translator_key, world.chain())
    outcome = verify_signature(
        b"payload", signature, world.anchors, world.registry,
        NOT_AFTER + timedelta(days=1),
    )
    assert outcome.result == "invalid"


def test_signature_includes_attribute_report(world):
    signature = sign(
        b"payload", world.translator_key, world.chain(),
        (world.attribute_certificate,), signing_time=MID_2026,
    )
    outcome = verify_signature(b"payload", signature, world.anchors, world.registry, MID_2026)
    assert outcome.result == "valid"
    assert len(outcome.attr_report) == 1
    report = outcome.attr_report[0]
    attrs = dict(report.attributes)
    assert attrs["role"] == "authorised translator fr-de"
    assert attrs["authority"] == "District Court"


def test_tampered_attribute_certificate_invalidates_signature(world):
    raw = canonical_bytes(attribute_certificate_to_node(world.attribute_certificate))
    tampered = attribute_certificate_from_node(
        parse_xml(raw.replace(b"fr-de", b"xx-yy"))
    )
    signature = sign(
        b"payload", world.translator_key, world.chain(), (tampered,),
        signing_time=MID_2026,
    )
    outcome = verify_signature(b"payload", signature, world.anchors, world.registry, MID_2026)
    assert outcome.result == "invalid"


# -- attribute certificates ----------------------------------------------------------

def test_attribute_certificate_round_trip(world):
    ac = world.attribute_certificate
    raw = canonical_bytes(attribute_certificate_to_node(ac))
    assert attribute_certificate_from_node(parse_xml(raw)) == ac


def test_attribute_certificate_requires_attributes(world):
    with pytest.raises(EmptyAttributes):
        world.court_ca.issue_attribute_certificate(
            world.translator_cert, (), NOT_BEFORE, NOT_AFTER, registry=world.registry
        )


def test_attribute_certificate_refuses_revoked_holder(world):
    cert = world.translator_cert
    world.registry.revoke(cert.issuer, cert.serial, MID_2026)
    with pytest.raises(HolderRevoked):
        world.court_ca.issue_attribute_certificate(
            cert, (("role", "r"),), MID_2026, NOT_AFTER,
            registry=world.registry, now=MID_2026 + timedelta(days=1),
        )


def test_attribute_certificate_refuses_expired_holder(world):
    short_key = generate_key_pair()
    short = world.root_ca.issue_certificate(
        "Shortlived", short_key.public_key, NOT_BEFORE, NOT_BEFORE + timedelta(days=1)
    )
    with pytest.raises(HolderExpired):
        world.court_ca.issue_attribute_certificate(
            short, (("role", "r"),), MID_2026, MID_2026 + timedelta(days=30),
            registry=world.registry, now=MID_2026,
        )


def test_verify_attribute_certificate_states(world):
    ac = world.attribute_certificate
    status, _ = verify_attribute_certificate(
        ac, world.anchors, world.registry, MID_2026, world.chain()
    )
    assert status == "valid"
    status, _ = verify_attribute_certificate(
        ac, world.anchors, world.registry, NOT_AFTER + timedelta(days=1), world.chain()
    )
    assert status == "expired"
    world.registry.revoke(ac.issuer, ac.serial, MID_2026)
    status, _ = verify_attribute_certificate(
        ac, world.anchors, world.registry, MID_2026, world.chain()
    )
    assert status == "revoked"


def test_certificate_data_field_shapes(world):
    data = certificate_data(world.translator_cert, "valid")
    assert data.subject == "Erika Muster"
    assert data.certificate_status == "valid"
    attr_data = attribute_certificate_data(world.attribute_certificate)
    assert dict(attr_data.attributes)["authority"] == "District Court"


# -- containers -----------------------------------------------------------------------

def test_trust_anchors_round_trip(world):
    raw = trust_anchors_to_bytes(world.anchors)
    again = trust_anchors_from_bytes(raw)
    assert trust_anchors_to_bytes(again) == raw
    assert again.contains(world.root_ca.certificate)


def test_trust_anchors_reject_non_roots(world):
    with pytest.raises(ParseError):
        trust_anchors_from_bytes(
            b"<TrustAnchors>"
            + canonical_bytes(certificate_to_node(world.translator_cert))
            + b"</TrustAnchors>"
        )


def test_revocation_registry_round_trip(world):
    world.registry.revoke("District Court", "7", MID_2026)
    world.registry.revoke("Seal Root CA", "3", MID_2026 + timedelta(hours=1))
    raw = revocation_registry_to_bytes(world.registry)
    again = revocation_registry_from_bytes(raw)
    assert revocation_registry_to_bytes(again) == raw
    assert again.is_revoked("District Court", "7", MID_2026)
    assert not again.is_revoked("District Court", "7", MID_2026 - timedelta(seconds=1))
