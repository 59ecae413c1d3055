#!/usr/bin/env python3
"""Mutation-fuzz a freshly built seal and report the detection rate.

Every mutant must be rejected — either at parse time or by one of the
verification gates.  The script prints which gate caught each class of
mutation and exits non-zero if anything slips through.

Run:  python3 scripts/fuzz_seals.py --rounds 2000 --seed 7
"""

from __future__ import annotations

import argparse
import collections
import hashlib
import random
import re
import sys
from datetime import datetime, timedelta, timezone

from transeal.errors import TransealError
from transeal.model import DocumentContent, LanguageSpecification, SignedDocumentContainer
from transeal.pki import (
    CertificateAuthority,
    RevocationRegistry,
    TrustAnchors,
    key_pair_from_seed,
)
from transeal.rules import default_rule_set
from transeal.sealxml import parse_seal, serialize_seal
from transeal.workflow import OperatorInput, SealerCredentials, run_translation_workflow, verify_seal

TEXT = "text/plain;charset=utf-8"


def build_seal():
    not_before = datetime(2026, 1, 1, tzinfo=timezone.utc)
    not_after = datetime(2031, 1, 1, tzinfo=timezone.utc)
    key = lambda label: key_pair_from_seed(hashlib.sha256(label.encode()).digest())
    root_ca = CertificateAuthority.create_root("Seal Root CA", key("fuzz:root"), not_before, not_after)
    court_ca = CertificateAuthority.create_root("District Court", key("fuzz:court"), not_before, not_after)
    anchors = TrustAnchors((root_ca.certificate, court_ca.certificate))
    registry = RevocationRegistry()
    sealer_key = key("fuzz:erika")
    cert = root_ca.issue_certificate(
        "Erika Muster", sealer_key.public_key, not_before, not_after, qc=True, now=not_before
    )
    role = court_ca.issue_attribute_certificate(
        cert,
        (("role", "authorised translator fr-de"), ("authority", "District Court")),
        not_before, not_after, registry=registry, now=not_before,
    )
    sealer = SealerCredentials(sealer_key, (cert, root_ca.certificate), role)

    clock_state = {"now": datetime(2026, 3, 2, 9, 0, tzinfo=timezone.utc)}

    def clock():
        clock_state["now"] += timedelta(seconds=1)
        return clock_state["now"]

    container = SignedDocumentContainer(
        DocumentContent.create("Bonjour le monde entier.".encode(), TEXT), ()
    )
    operator_input = OperatorInput(
        source_format=TEXT,
        target_format=TEXT,
        language_specification=LanguageSpecification("fr", "de"),
        target_content=DocumentContent.create("Hallo, weite Welt.".encode(), TEXT),
        defects=("stamp partially illegible",),
        comments="Fuzzing corpus seal.",
        accuracy_attestation="Certified faithful and complete translation.",
        sealing_location="Berlin",
        conversion_assay_confirmed=True,
    )
    sealed = run_translation_workflow(
        container, operator_input, default_rule_set(), sealer, anchors, registry,
        operator_name="erika", clock=clock,
    )
    return serialize_seal(sealed), anchors, registry


def mutate(raw: bytes, rng: random.Random) -> bytes:
    """One random mutation: byte flip, or edit of a text/attribute span."""
    if rng.random() < 0.5:
        position = rng.randrange(len(raw))
        replacement = rng.randrange(256)
        while replacement == raw[position]:
            replacement = rng.randrange(256)
        return raw[:position] + bytes([replacement]) + raw[position + 1:]

    text = raw.decode("utf-8")
    spans = list(re.finditer(r">([^<>]+)<", text)) + list(re.finditer(r'="([^"]+)"', text))
    match = rng.choice(spans)
    start, end = match.span(1)
    span = match.group(1)
    position = rng.randrange(len(span))
    substitute = "A" if span[position] != "A" else "B"
    edited = rng.choice(
        (
            span[:position] + substitute + span[position + 1:],
            span[:position] + span[position + 1:],
            span + "X",
        )
    )
    if edited == span:
        edited = span + "Y"
    return (text[:start] + edited + text[end:]).encode()


def classify(mutant: bytes, anchors, registry) -> str:
    try:
        sealed = parse_seal(mutant)
    except TransealError:
        return "parse-rejected"
    report = verify_seal(sealed, anchors, registry)
    if report.seal_signature.result != "valid":
        return "seal-signature"
    if not report.binding_ok:
        return "binding"
    if not report.report_chain_ok:
        return "report-chain"
    return "UNDETECTED"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rounds", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    raw, anchors, registry = build_seal()
    print(f"base seal: {len(raw)} bytes; fuzzing {args.rounds} mutants (seed {args.seed})")

    rng = random.Random(args.seed)
    tally: collections.Counter[str] = collections.Counter()
    escapes = []
    for _ in range(args.rounds):
        mutant = mutate(raw, rng)
        if mutant == raw:
            continue
        verdict = classify(mutant, anchors, registry)
        tally[verdict] += 1
        if verdict == "UNDETECTED":
            escapes.append(mutant)

    for verdict, count in tally.most_common():
        print(f"  {verdict:<15} {count}")
    if escapes:
        print(f"{len(escapes)} undetected mutants — dumping the first one")
        sys.stdout.buffer.write(escapes[0] + b"\n")
        return 1
    print("all mutants detected")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
