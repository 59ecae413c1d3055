"""HTTP facade: FastAPI routes over :class:`TranslationService`.

Authentication is header-based: translators send ``X-Translator-Id`` and
``X-Credential``; administrative calls send ``X-Admin-Token``.  Error
responses carry ``{"code", "message", "detail"}``.  Trust anchors, the
revocation registry and seal verification are public — anyone can check
a seal without an account.
"""

from __future__ import annotations

import logging

from fastapi import Body, FastAPI, Header, Request, Response
from fastapi.responses import JSONResponse

from ..errors import (
    DuplicateName,
    NotFound,
    NotInDirectory,
    ParseError,
    RuleFailure,
    TransealError,
    RevokedTranslator,
    Unauthorised,
)
from ..xmlutil import b64decode_strict
from .core import TranslationService

logger = logging.getLogger(__name__)

__all__ = ["create_app"]

_STATUS_BY_TYPE: tuple[tuple[type, int, str], ...] = (
    (Unauthorised, 401, "unauthorised"),
    (RevokedTranslator, 403, "not-authorised"),
    (NotFound, 404, "not-found"),
    (DuplicateName, 409, "duplicate-name"),
    (NotInDirectory, 409, "not-in-directory"),
    (ParseError, 400, "parse-error"),
)


def _error_response(exc: Exception) -> JSONResponse:
    for exc_type, status, code in _STATUS_BY_TYPE:
        if isinstance(exc, exc_type):
            return JSONResponse(
                status_code=status,
                content={"code": code, "message": str(exc), "detail": None},
            )
    detail = None
    if isinstance(exc, RuleFailure):
        detail = exc.rule_id
    return JSONResponse(
        status_code=422,
        content={"code": "unprocessable", "message": str(exc), "detail": detail},
    )


def create_app(service: TranslationService) -> FastAPI:
    app = FastAPI(title="transeal sealing service", docs_url=None, redoc_url=None)

    @app.exception_handler(TransealError)
    async def _handle_domain_error(_: Request, exc: TransealError) -> JSONResponse:
        return _error_response(exc)

    @app.exception_handler(ValueError)
    async def _handle_value_error(_: Request, exc: ValueError) -> JSONResponse:
        return _error_response(exc)

    def _translator(translator_id: str | None, credential: str | None):
        return service.authenticate(translator_id, credential)

    # -- public ---------------------------------------------------------------

    @app.get("/healthz")
    async def healthz() -> dict:
        return service.health()

    @app.get("/anchors")
    async def anchors() -> Response:
        return Response(service.anchors_bytes(), media_type="application/xml")

    @app.get("/revocations")
    async def revocations() -> Response:
        return Response(service.revocations_bytes(), media_type="application/xml")

    @app.post("/seals/verify")
    async def verify(payload: dict = Body(...)) -> dict:
        if "tseal" not in payload:
            raise ValueError("request is missing 'tseal'")
        return service.verify(b64decode_strict(payload["tseal"], path="tseal"))

    # -- translator accounts ----------------------------------------------------

    @app.post("/translators", status_code=201)
    async def register(payload: dict = Body(...)) -> dict:
        try:
            name = payload["name"]
            credential = payload["credential"]
        except KeyError as missing:
            raise ValueError(f"request is missing {missing.args[0]!r}")
        return service.register_translator(name, credential)

    @app.get("/translators")
    async def find_translator(name: str) -> dict:
        return service.find_translator(name)

    @app.get("/translators/{translator_id}")
    async def translator_info(translator_id: str) -> dict:
        return service.translator_info(translator_id)

    @app.post("/translators/{translator_id}/authorise")
    async def authorise(
        translator_id: str,
        payload: dict = Body(...),
        x_admin_token: str | None = Header(None),
    ) -> dict:
        service.check_admin(x_admin_token)
        pairs = payload.get("languagePairs")
        if not isinstance(pairs, list):
            raise ValueError("request needs 'languagePairs': [\"fr-de\", ...]")
        valid_days = int(payload.get("validDays", 365))
        return service.authorise(translator_id, pairs, valid_days=valid_days)

    @app.post("/translators/{translator_id}/revoke")
    async def revoke(
        translator_id: str,
        x_admin_token: str | None = Header(None),
    ) -> dict:
        service.check_admin(x_admin_token)
        return service.revoke(translator_id)

    # -- court directory (admin) --------------------------------------------------

    @app.get("/admin/court")
    async def court_list(x_admin_token: str | None = Header(None)) -> list:
        service.check_admin(x_admin_token)
        return service.court_directory()

    @app.put("/admin/court/{authority}/{name}")
    async def court_enter(
        authority: str,
        name: str,
        x_admin_token: str | None = Header(None),
    ) -> dict:
        service.check_admin(x_admin_token)
        return service.enter_court_directory(authority, name)

    @app.delete("/admin/court/{authority}/{name}", status_code=204)
    async def court_remove(
        authority: str,
        name: str,
        x_admin_token: str | None = Header(None),
    ) -> Response:
        service.check_admin(x_admin_token)
        service.remove_from_court_directory(authority, name)
        return Response(status_code=204)

    # -- jobs -----------------------------------------------------------------------

    @app.post("/jobs", status_code=201)
    async def create_job(
        payload: dict = Body(...),
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> dict:
        record = _translator(x_translator_id, x_credential)
        return service.create_job(record, payload)

    @app.get("/jobs/{job_id}")
    async def job_status(
        job_id: str,
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> dict:
        record = _translator(x_translator_id, x_credential)
        return service.job_status(record, job_id)

    @app.post("/jobs/{job_id}/classify")
    async def job_classify(
        job_id: str,
        payload: dict = Body(...),
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> dict:
        record = _translator(x_translator_id, x_credential)
        return service.job_classify(record, job_id, payload)

    @app.post("/jobs/{job_id}/target")
    async def job_target(
        job_id: str,
        payload: dict = Body(...),
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> dict:
        record = _translator(x_translator_id, x_credential)
        return service.job_target(record, job_id, payload)

    @app.post("/jobs/{job_id}/assay")
    async def job_assay(
        job_id: str,
        payload: dict = Body(...),
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> dict:
        record = _translator(x_translator_id, x_credential)
        return service.job_assay(record, job_id, payload)

    @app.post("/jobs/{job_id}/seal")
    async def job_seal(
        job_id: str,
        payload: dict = Body(...),
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> dict:
        record = _translator(x_translator_id, x_credential)
        return service.job_seal(record, job_id, payload)

    @app.get("/jobs/{job_id}/result")
    async def job_result(
        job_id: str,
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> Response:
        record = _translator(x_translator_id, x_credential)
        return Response(
            service.job_result(record, job_id), media_type="application/xml"
        )

    # -- one-shot sealing --------------------------------------------------------------

    @app.post("/seals")
    async def one_shot_seal(
        payload: dict = Body(...),
        x_translator_id: str | None = Header(None),
        x_credential: str | None = Header(None),
    ) -> dict:
        record = _translator(x_translator_id, x_credential)
        return service.one_shot_seal(record, payload)

    return app
