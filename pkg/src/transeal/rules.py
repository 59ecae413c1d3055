"""Rule catalogue, rule-set configuration and the workflow definition.

The rule identifiers are a fixed catalogue: three classification rules,
two signature-extraction rules and ten transformation-assay rules.  A
:class:`RuleSet` selects rules and parameterizes them (allowed formats,
validation policy, which signature data to copy); its canonical digest is
recorded in every workflow report so the executed rule set is bound into
the seal.

The :class:`WorkflowDefinition` pins the five activities, their performers
and their rule assignment; the engine refuses any other activity sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvariantViolation, ParseError
from .model import ACTIVITY_NAMES, PERFORMER_KINDS
from .xmlutil import NodeReader, XmlNode, canonical_bytes, content_digest, el, parse_xml

__all__ = [
    "RULE_CLASSIFICATION_ReportOriginalDocumentClassification",
    "RULE_CLASSIFICATION_CheckOriginalFormat",
    "RULE_CLASSIFICATION_CheckTargetFormat",
    "RULE_SIGNATUREEXTRACTION_VerifySignature",
    "RULE_SIGNATUREEXTRACTION_ReportSignatureData",
    "RULE_TRANSFORMATIONASSAY_CheckUsedComponents",
    "RULE_TRANSFORMATIONASSAY_CheckSignatureExtraction",
    "RULE_TRANSFORMATIONASSAY_CheckConsistencyOfReport",
    "RULE_TRANSFORMATIONASSAY_CheckSignatures",
    "RULE_TRANSFORMATIONASSAY_CopyOriginalDocumentToAnnotation",
    "RULE_TRANSFORMATIONASSAY_CopyDefectsToAnnotation",
    "RULE_TRANSFORMATIONASSAY_CopyOriginalValidationResultToAnnotation",
    "RULE_TRANSFORMATIONASSAY_CopyOriginalSignatureDataToAnnotation",
    "RULE_TRANSFORMATIONASSAY_BuildAnnotation",
    "RULE_TRANSFORMATIONASSAY_CreateSignature",
    "RULE_CATALOGUE",
    "RULES_BY_ACTIVITY",
    "RuleConfig",
    "RuleSet",
    "WorkflowDefinition",
    "default_rule_set",
    "default_workflow_definition",
    "COPYABLE_SIGNATURE_FIELDS",
    "VALIDATION_POLICIES",
]

# --- classification ---------------------------------------------------------
RULE_CLASSIFICATION_ReportOriginalDocumentClassification = (
    "RULE_CLASSIFICATION_ReportOriginalDocumentClassification"
)
RULE_CLASSIFICATION_CheckOriginalFormat = "RULE_CLASSIFICATION_CheckOriginalFormat"
RULE_CLASSIFICATION_CheckTargetFormat = "RULE_CLASSIFICATION_CheckTargetFormat"

# --- signature extraction ----------------------------------------------------
RULE_SIGNATUREEXTRACTION_VerifySignature = "RULE_SIGNATUREEXTRACTION_VerifySignature"
RULE_SIGNATUREEXTRACTION_ReportSignatureData = (
    "RULE_SIGNATUREEXTRACTION_ReportSignatureData"
)

# --- transformation assay ----------------------------------------------------
RULE_TRANSFORMATIONASSAY_CheckUsedComponents = (
    "RULE_TRANSFORMATIONASSAY_CheckUsedComponents"
)
RULE_TRANSFORMATIONASSAY_CheckSignatureExtraction = (
    "RULE_TRANSFORMATIONASSAY_CheckSignatureExtraction"
)
RULE_TRANSFORMATIONASSAY_CheckConsistencyOfReport = (
    "RULE_TRANSFORMATIONASSAY_CheckConsistencyOfReport"
)
RULE_TRANSFORMATIONASSAY_CheckSignatures = "RULE_TRANSFORMATIONASSAY_CheckSignatures"
RULE_TRANSFORMATIONASSAY_CopyOriginalDocumentToAnnotation = (
    "RULE_TRANSFORMATIONASSAY_CopyOriginalDocumentToAnnotation"
)
RULE_TRANSFORMATIONASSAY_CopyDefectsToAnnotation = (
    "RULE_TRANSFORMATIONASSAY_CopyDefectsToAnnotation"
)
RULE_TRANSFORMATIONASSAY_CopyOriginalValidationResultToAnnotation = (
    "RULE_TRANSFORMATIONASSAY_CopyOriginalValidationResultToAnnotation"
)
RULE_TRANSFORMATIONASSAY_CopyOriginalSignatureDataToAnnotation = (
    "RULE_TRANSFORMATIONASSAY_CopyOriginalSignatureDataToAnnotation"
)
RULE_TRANSFORMATIONASSAY_BuildAnnotation = "RULE_TRANSFORMATIONASSAY_BuildAnnotation"
RULE_TRANSFORMATIONASSAY_CreateSignature = "RULE_TRANSFORMATIONASSAY_CreateSignature"

RULES_BY_ACTIVITY: dict[str, tuple[str, ...]] = {
    "Classification": (
        RULE_CLASSIFICATION_ReportOriginalDocumentClassification,
        RULE_CLASSIFICATION_CheckOriginalFormat,
        RULE_CLASSIFICATION_CheckTargetFormat,
    ),
    "SignatureExtraction": (
        RULE_SIGNATUREEXTRACTION_VerifySignature,
        RULE_SIGNATUREEXTRACTION_ReportSignatureData,
    ),
    "Conversion": (),
    "ConversionAssay": (),
    "TransformationAssay": (
        RULE_TRANSFORMATIONASSAY_CheckUsedComponents,
        RULE_TRANSFORMATIONASSAY_CheckSignatureExtraction,
        RULE_TRANSFORMATIONASSAY_CheckConsistencyOfReport,
        RULE_TRANSFORMATIONASSAY_CheckSignatures,
        RULE_TRANSFORMATIONASSAY_CopyOriginalDocumentToAnnotation,
        RULE_TRANSFORMATIONASSAY_CopyDefectsToAnnotation,
        RULE_TRANSFORMATIONASSAY_CopyOriginalValidationResultToAnnotation,
        RULE_TRANSFORMATIONASSAY_CopyOriginalSignatureDataToAnnotation,
        RULE_TRANSFORMATIONASSAY_BuildAnnotation,
        RULE_TRANSFORMATIONASSAY_CreateSignature,
    ),
}

RULE_CATALOGUE: tuple[str, ...] = tuple(
    rule_id for rules in RULES_BY_ACTIVITY.values() for rule_id in rules
)

# fields of a signature report the copy rule may be parameterized with;
# signer, signing time and certificate data are always carried
COPYABLE_SIGNATURE_FIELDS = (
    "signer",
    "authority",
    "signingTime",
    "certificates",
    "attributeCertificates",
)

VALIDATION_POLICIES = ("chain-to-anchor",)

# rules that must carry parameters when present in a rule set
_REQUIRED_PARAMS: dict[str, str] = {
    RULE_CLASSIFICATION_CheckOriginalFormat: "allowedFormat",
    RULE_CLASSIFICATION_CheckTargetFormat: "allowedFormat",
    RULE_SIGNATUREEXTRACTION_VerifySignature: "validationPolicy",
    RULE_SIGNATUREEXTRACTION_ReportSignatureData: "reportOnlyUserCertificate",
    RULE_TRANSFORMATIONASSAY_CopyOriginalSignatureDataToAnnotation: "field",
}


@dataclass(frozen=True)
class RuleConfig:
    rule_id: str
    params: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", tuple(tuple(p) for p in self.params))
        if self.rule_id not in RULE_CATALOGUE:
            raise InvariantViolation(f"unknown rule identifier {self.rule_id!r}")

    def values(self, name: str) -> tuple[str, ...]:
        return tuple(value for key, value in self.params if key == name)

    def value(self, name: str, default: str | None = None) -> str | None:
        values = self.values(name)
        return values[0] if values else default


@dataclass(frozen=True)
class RuleSet:
    """Ordered rule configurations; the canonical digest seals the choice."""

    rules: tuple[RuleConfig, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        seen: set[str] = set()
        for rule in self.rules:
            if rule.rule_id in seen:
                raise InvariantViolation(f"duplicate rule {rule.rule_id}")
            seen.add(rule.rule_id)
            required = _REQUIRED_PARAMS.get(rule.rule_id)
            if required and not rule.values(required):
                raise InvariantViolation(
                    f"rule {rule.rule_id} requires parameter {required!r}"
                )

    def rule(self, rule_id: str) -> RuleConfig | None:
        for rule in self.rules:
            if rule.rule_id == rule_id:
                return rule
        return None

    def require(self, rule_id: str) -> RuleConfig:
        rule = self.rule(rule_id)
        if rule is None:
            raise InvariantViolation(f"rule set does not configure {rule_id}")
        return rule

    def values(self, rule_id: str, name: str) -> tuple[str, ...]:
        rule = self.rule(rule_id)
        return rule.values(name) if rule else ()

    def value(self, rule_id: str, name: str, default: str | None = None) -> str | None:
        rule = self.rule(rule_id)
        return rule.value(name, default) if rule else default

    def to_node(self) -> XmlNode:
        rule_nodes = []
        for rule in self.rules:
            children = [el("RuleId", text=rule.rule_id)]
            children.extend(
                el("Param", el("Name", text=name), el("Value", text=value))
                for name, value in rule.params
            )
            rule_nodes.append(el("Rule", *children))
        return el("RuleSet", *rule_nodes)

    def to_bytes(self) -> bytes:
        return canonical_bytes(self.to_node())

    def digest(self) -> str:
        return content_digest(self.to_bytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "RuleSet":
        root = parse_xml(data)
        r = NodeReader(root, expect="RuleSet")
        rules = []
        for rule_node in r.take_all("Rule"):
            rr = NodeReader(rule_node, path="RuleSet/Rule")
            rule_id = rr.text("RuleId")
            params = []
            for p_node in rr.take_all("Param"):
                pr = NodeReader(p_node, path="RuleSet/Rule/Param")
                params.append((pr.text("Name"), pr.text("Value")))
                pr.finish()
            rr.finish()
            try:
                rules.append(RuleConfig(rule_id, tuple(params)))
            except InvariantViolation as exc:
                raise ParseError(str(exc)) from None
        r.finish()
        try:
            return cls(tuple(rules))
        except InvariantViolation as exc:
            raise ParseError(str(exc)) from None


def default_rule_set(
    source_formats: Sequence[str] = ("text/plain;charset=utf-8", "application/pdf"),
    target_formats: Sequence[str] = ("text/plain;charset=utf-8", "application/pdf"),
    *,
    validation_policy: str = "chain-to-anchor",
    report_only_user_certificate: bool = False,
    copy_fields: Sequence[str] = COPYABLE_SIGNATURE_FIELDS,
) -> RuleSet:
    """The full 15-rule configuration used by the CLI and the service."""
    flag = "true" if report_only_user_certificate else "false"
    return RuleSet(
        (
            RuleConfig(RULE_CLASSIFICATION_ReportOriginalDocumentClassification),
            RuleConfig(
                RULE_CLASSIFICATION_CheckOriginalFormat,
                tuple(("allowedFormat", f) for f in source_formats),
            ),
            RuleConfig(
                RULE_CLASSIFICATION_CheckTargetFormat,
                tuple(("allowedFormat", f) for f in target_formats),
            ),
            RuleConfig(
                RULE_SIGNATUREEXTRACTION_VerifySignature,
                (("validationPolicy", validation_policy),),
            ),
            RuleConfig(
                RULE_SIGNATUREEXTRACTION_ReportSignatureData,
                (("reportOnlyUserCertificate", flag),),
            ),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CheckUsedComponents),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CheckSignatureExtraction),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CheckConsistencyOfReport),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CheckSignatures),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CopyOriginalDocumentToAnnotation),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CopyDefectsToAnnotation),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CopyOriginalValidationResultToAnnotation),
            RuleConfig(
                RULE_TRANSFORMATIONASSAY_CopyOriginalSignatureDataToAnnotation,
                tuple(("field", f) for f in copy_fields),
            ),
            RuleConfig(RULE_TRANSFORMATIONASSAY_BuildAnnotation),
            RuleConfig(RULE_TRANSFORMATIONASSAY_CreateSignature),
        )
    )


# ---------------------------------------------------------------------------
# workflow definition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ActivityDefinition:
    name: str
    performer_kind: str  # operator | component | operator+component
    rule_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rule_ids", tuple(self.rule_ids))
        if self.name not in ACTIVITY_NAMES:
            raise InvariantViolation(f"unknown activity {self.name!r}")
        if self.performer_kind not in ("operator", "component", "operator+component"):
            raise InvariantViolation(f"unknown performer kind {self.performer_kind!r}")
        for rule_id in self.rule_ids:
            if rule_id not in RULE_CATALOGUE:
                raise InvariantViolation(f"unknown rule identifier {rule_id!r}")


@dataclass(frozen=True)
class WorkflowDefinition:
    """Exactly the five activities, in order, with their rule assignment."""

    activities: tuple[ActivityDefinition, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "activities", tuple(self.activities))
        names = tuple(a.name for a in self.activities)
        if names != ACTIVITY_NAMES:
            raise InvariantViolation(
                f"workflow definition must list {ACTIVITY_NAMES}, found {names}"
            )

    def activity(self, name: str) -> ActivityDefinition:
        for activity in self.activities:
            if activity.name == name:
                return activity
        raise InvariantViolation(f"unknown activity {name!r}")

    def to_bytes(self) -> bytes:
        nodes = []
        for activity in self.activities:
            children = [
                el("Name", text=activity.name),
                el("Performer", text=activity.performer_kind),
            ]
            children.extend(el("RuleId", text=r) for r in activity.rule_ids)
            nodes.append(el("Activity", *children))
        return canonical_bytes(el("WorkflowDefinition", *nodes))

    @classmethod
    def from_bytes(cls, data: bytes) -> "WorkflowDefinition":
        root = parse_xml(data)
        r = NodeReader(root, expect="WorkflowDefinition")
        activities = []
        for a_node in r.take_all("Activity"):
            ar = NodeReader(a_node, path="WorkflowDefinition/Activity")
            name = ar.text("Name")
            performer = ar.text("Performer")
            rule_ids = []
            while True:
                rule_id = ar.text_optional("RuleId")
                if rule_id is None:
                    break
                rule_ids.append(rule_id)
            ar.finish()
            try:
                activities.append(ActivityDefinition(name, performer, tuple(rule_ids)))
            except InvariantViolation as exc:
                raise ParseError(str(exc)) from None
        r.finish()
        try:
            return cls(tuple(activities))
        except InvariantViolation as exc:
            raise ParseError(str(exc)) from None


def default_workflow_definition() -> WorkflowDefinition:
    return WorkflowDefinition(
        tuple(
            ActivityDefinition(
                name=name,
                performer_kind=PERFORMER_KINDS[name],
                rule_ids=RULES_BY_ACTIVITY[name],
            )
            for name in ACTIVITY_NAMES
        )
    )
