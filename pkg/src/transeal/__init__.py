"""transeal — cryptographically sealed, authorised electronic translations.

A sealed translation binds the translated document, the embedded original,
the translator's annotation and a signed, hash-chained workflow report into
one verifiable container.  See the README for the wire formats and the
service API.
"""

from .errors import (
    AlreadyRevokedWarning,
    AssayDeclined,
    EmptyTarget,
    InvalidLanguageTag,
    InvariantViolation,
    MissingAttributeCertificate,
    OutOfDomain,
    ParseError,
    PhaseOrderError,
    PkiError,
    RuleFailure,
    ServiceError,
    TransealError,
    WorkflowError,
)
from .i18n import (
    CALENDAR_CONVERSIONS,
    DEFAULT_TRANSLITERATIONS,
    THAI_BUDDHIST_GREGORIAN,
    CalendarConversion,
    LanguageTag,
    TransliterationRegistry,
    convert_year,
    format_utc,
    validate_language_tag,
)
from .model import (
    ACTIVITY_NAMES,
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
    ALGORITHM_ID,
    AttributeCertificate,
    AttributeCertificateData,
    Certificate,
    CertificateAuthority,
    CertificateData,
    EmbeddedSignature,
    KeyPair,
    RevocationRegistry,
    TrustAnchors,
    ValidationOutcome,
    certificate_status,
    generate_key_pair,
    key_pair_from_seed,
    read_key_file,
    read_public_key_file,
    sign,
    verify_attribute_certificate,
    verify_signature,
    write_key_file,
    write_public_key_file,
)
from .rules import (
    RULE_CATALOGUE,
    RuleConfig,
    RuleSet,
    WorkflowDefinition,
    default_rule_set,
    default_workflow_definition,
)
from .sealxml import (
    parse_document,
    parse_seal,
    serialize_document,
    serialize_seal,
)
from .workflow import (
    OperatorInput,
    SealerCredentials,
    SealVerificationReport,
    TranslationWorkflow,
    run_translation_workflow,
    verify_seal,
)

__version__ = "0.3.0"

__all__ = [
    "__version__",
    # errors
    "TransealError",
    "ParseError",
    "InvariantViolation",
    "InvalidLanguageTag",
    "OutOfDomain",
    "PkiError",
    "AlreadyRevokedWarning",
    "WorkflowError",
    "RuleFailure",
    "MissingAttributeCertificate",
    "EmptyTarget",
    "AssayDeclined",
    "PhaseOrderError",
    "ServiceError",
    # i18n
    "LanguageTag",
    "validate_language_tag",
    "TransliterationRegistry",
    "DEFAULT_TRANSLITERATIONS",
    "CalendarConversion",
    "CALENDAR_CONVERSIONS",
    "THAI_BUDDHIST_GREGORIAN",
    "convert_year",
    "format_utc",
    # model
    "ACTIVITY_NAMES",
    "compute_content_id",
    "DocumentContent",
    "SignedDocumentContainer",
    "LanguageSpecification",
    "OriginalSignatureReport",
    "Annotation",
    "RuleOutcome",
    "ClassificationPayload",
    "ExtractionPayload",
    "ConversionPayload",
    "ConversionAssayPayload",
    "TransformationAssayPayload",
    "ActivityData",
    "WorkflowReport",
    "TranslationSeal",
    "SealedTranslation",
    # pki
    "ALGORITHM_ID",
    "KeyPair",
    "generate_key_pair",
    "key_pair_from_seed",
    "read_key_file",
    "write_key_file",
    "read_public_key_file",
    "write_public_key_file",
    "Certificate",
    "AttributeCertificate",
    "CertificateData",
    "AttributeCertificateData",
    "EmbeddedSignature",
    "ValidationOutcome",
    "RevocationRegistry",
    "TrustAnchors",
    "CertificateAuthority",
    "certificate_status",
    "sign",
    "verify_signature",
    "verify_attribute_certificate",
    # rules & workflow
    "RULE_CATALOGUE",
    "RuleConfig",
    "RuleSet",
    "WorkflowDefinition",
    "default_rule_set",
    "default_workflow_definition",
    "OperatorInput",
    "SealerCredentials",
    "TranslationWorkflow",
    "run_translation_workflow",
    "SealVerificationReport",
    "verify_seal",
    # wire formats
    "serialize_document",
    "parse_document",
    "serialize_seal",
    "parse_seal",
]
