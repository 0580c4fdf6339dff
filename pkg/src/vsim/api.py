"""HTTP surface for the claim-matching service.

JSON in, JSON out; errors use one envelope: {"error": {"code", "message"}}.
"""

from __future__ import annotations

from contextlib import asynccontextmanager
from typing import Literal

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from . import errors
from .service import ClaimMatchingService

_STATUS_BY_ERROR: list[tuple[type[Exception], int, str]] = [
    (errors.DuplicateId, 409, "DuplicateId"),
    (errors.AlreadyDecided, 409, "AlreadyDecided"),
    (errors.IllegalTransition, 409, "IllegalTransition"),
    (errors.NotFound, 404, "NotFound"),
    (errors.NoTokens, 422, "Unvectorizable"),
    (errors.AllOutOfVocabulary, 422, "Unvectorizable"),
    (errors.UnvectorizableText, 422, "Unvectorizable"),
    (errors.DimensionMismatch, 500, "DimensionMismatch"),
]


class SubmitTextRequest(BaseModel):
    id: str
    text: str
    status: Literal["pending", "fact_checked"]
    metadata: dict[str, str] = Field(default_factory=dict)


class PatchTextRequest(BaseModel):
    status: Literal["pending", "fact_checked"]


class SimilarRequest(BaseModel):
    text: str
    k: int | None = None
    threshold: float | None = None
    status: Literal["pending", "fact_checked"] | None = None


class DecisionRequest(BaseModel):
    decision: Literal["confirm", "dismiss"]


def _error_response(status_code: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={"error": {"code": code, "message": message}},
    )


def create_app(service: ClaimMatchingService) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        service.start_background()
        try:
            yield
        finally:
            service.close()

    app = FastAPI(title="vsim", lifespan=lifespan)
    app.state.service = service
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[service.config.ui_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(errors.VsimError)
    async def vsim_error_handler(request: Request, exc: errors.VsimError):
        for klass, status_code, code in _STATUS_BY_ERROR:
            if isinstance(exc, klass):
                message = str(exc)
                if code == "Unvectorizable":
                    message = f"{type(exc).__name__}: {message}"
                return _error_response(status_code, code, message)
        return _error_response(500, "Internal", str(exc))

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return _error_response(400, "InvalidRequest", str(exc))

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return _error_response(400, "InvalidRequest", str(exc.errors()[:3]))

    @app.post("/texts", status_code=201)
    def submit_text(body: SubmitTextRequest):
        item, suggestions = service.submit_text(
            body.id, body.text, body.status, body.metadata
        )
        return {
            "id": item["id"],
            "suggestions": [
                {
                    "suggestion_id": s.suggestion_id,
                    "target_id": s.target_id,
                    "score": s.score,
                }
                for s in suggestions
            ],
        }

    @app.get("/texts/{item_id}")
    def get_text(item_id: str):
        return service.get_item(item_id)

    @app.delete("/texts/{item_id}", status_code=204)
    def delete_text(item_id: str):
        service.delete_item(item_id)
        return Response(status_code=204)

    @app.patch("/texts/{item_id}")
    def patch_text(item_id: str, body: PatchTextRequest):
        return service.update_status(item_id, body.status)

    @app.post("/similar")
    def similar(body: SimilarRequest):
        hits = service.query_similar(
            body.text, k=body.k, threshold=body.threshold, status_filter=body.status
        )
        return {
            "hits": [
                {
                    "id": h.id,
                    "score": h.score,
                    "text": h.text,
                    "status": h.status,
                    "metadata": h.metadata,
                }
                for h in hits
            ]
        }

    @app.get("/suggestions")
    def list_suggestions(
        state: str | None = Query(default=None),
        source_id: str | None = Query(default=None),
    ):
        rows = service.list_suggestions(state=state, source_id=source_id)
        return {"suggestions": [s.to_dict() for s in rows]}

    @app.post("/suggestions/{suggestion_id}/decision")
    def decide(suggestion_id: str, body: DecisionRequest):
        return service.decide_suggestion(suggestion_id, body.decision).to_dict()

    @app.get("/healthz")
    def healthz():
        return service.health()

    @app.get("/stats")
    def stats():
        return service.stats()

    return app
