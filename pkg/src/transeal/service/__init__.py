"""Sealing service: a small HTTP facade over the workflow engine.

The service owns a root certificate authority for translator identities
and a court authority for authorisation attribute certificates, keeps
both anchored in a published trust list, and drives translation jobs
through the five workflow phases on behalf of registered translators.
"""

from .app import create_app
from .core import ServiceConfig, TranslationService, build_service
from .store import ServiceStore

__all__ = [
    "ServiceConfig",
    "ServiceStore",
    "TranslationService",
    "build_service",
    "create_app",
]
