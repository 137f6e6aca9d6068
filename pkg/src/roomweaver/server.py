"""HTTP service exposing the pipeline under /v1.

Every response body is the envelope {"ok": true, "data": ...} or
{"ok": false, "error": {"code", "message", "detail"}}. The service holds no
per-request state beyond the immutable exemplar store, the catalog and the
gateway's fixture cache, so identical requests in replay mode return
identical bodies.
"""

from __future__ import annotations

import logging
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .assemble import AssembleOptions, Catalog, CategoryNotInCatalog, assemble
from .core import RoomSpec, validate_layout
from .describe import describe
from .gateway import (
    AuthError,
    FixtureMiss,
    Gateway,
    GatewayError,
    generate_layout,
)
from .grammar import GrammarError, serialize_layout
from .interchange import SchemaError, layout_from_dict, layout_to_dict
from .prompts import (
    Condition,
    ExemplarStore,
    InsufficientExemplars,
    SelectionStrategy,
    build_prompt,
    condition_distance,
    select_exemplars,
)

log = logging.getLogger(__name__)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: Any = None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


def _ok(data: Any) -> dict:
    return {"ok": True, "data": data}


def _error_response(status: int, code: str, message: str, detail: Any = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"ok": False, "error": {"code": code, "message": message, "detail": detail}},
    )


class GenerateRequest(BaseModel):
    room_type: str
    length: float = Field(gt=0)
    width: float = Field(gt=0)
    description: str
    k: int = Field(default=8, ge=1)
    strategy: str = "retrieval"
    seed: int | None = None
    repair_attempts: int = Field(default=0, ge=0)


class LayoutRequest(BaseModel):
    layout: dict
    tol: float = Field(default=0.01, ge=0)


class AssembleRequest(BaseModel):
    layout: dict
    fit_to_box: bool = False
    cameras_on: bool = True
    camera_count: int = Field(default=250, ge=1)


def create_app(
    store: ExemplarStore,
    gateway: Gateway,
    catalog: Catalog | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="roomweaver", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(_request: Request, exc: RequestValidationError):
        return _error_response(400, "bad_request", "malformed request body", exc.errors())

    @app.exception_handler(ApiError)
    async def _on_api_error(_request: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.detail)

    def _parse_layout_body(raw: dict):
        try:
            return layout_from_dict(raw, source="<request>")
        except SchemaError as exc:
            raise ApiError(400, "bad_layout", "layout document is invalid", exc.detail)

    @app.get("/v1/health")
    def health():
        return _ok({"status": "up", "exemplars": len(store)})

    @app.post("/v1/generate")
    def generate(req: GenerateRequest):
        try:
            strategy = SelectionStrategy(req.strategy)
        except ValueError:
            raise ApiError(400, "bad_request", f"unknown strategy {req.strategy!r}")
        room = RoomSpec(room_type=req.room_type, length=req.length, width=req.width)
        query = Condition(description=req.description, room=room)
        try:
            exemplars = select_exemplars(store, query, req.k, strategy, seed=req.seed)
        except InsufficientExemplars as exc:
            raise ApiError(400, "insufficient_exemplars", str(exc))
        bundle = build_prompt(query, exemplars)
        try:
            layout, diagnostics = generate_layout(
                room, bundle, gateway, repair_attempts=req.repair_attempts
            )
        except FixtureMiss as exc:
            raise ApiError(404, "fixture_miss", str(exc))
        except (AuthError, GatewayError) as exc:
            raise ApiError(502, "upstream_error", str(exc))
        except GrammarError as exc:
            raise ApiError(502, "unparseable_reply", str(exc))
        return _ok({"layout": layout_to_dict(layout), "diagnostics": diagnostics.to_dict()})

    @app.post("/v1/validate")
    def validate(req: LayoutRequest):
        layout = _parse_layout_body(req.layout)
        violations = validate_layout(layout, req.tol)
        return _ok(
            {
                "oob": any(v.kind == "oob" for v in violations),
                "overlap": any(v.kind == "overlap" for v in violations),
                "violations": [
                    {
                        "box_index": v.box_index,
                        "kind": v.kind,
                        "detail": v.detail,
                        **({"partner": v.partner} if v.partner is not None else {}),
                    }
                    for v in violations
                ],
            }
        )

    @app.post("/v1/describe")
    def describe_endpoint(req: LayoutRequest):
        layout = _parse_layout_body(req.layout)
        description = describe(layout)
        return _ok({"sentences": list(description.sentences), "source": description.source.value})

    @app.post("/v1/assemble")
    def assemble_endpoint(req: AssembleRequest):
        if catalog is None:
            raise ApiError(400, "no_catalog", "service was started without a catalog")
        layout = _parse_layout_body(req.layout)
        opts = AssembleOptions(
            fit_to_box=req.fit_to_box,
            cameras_on=req.cameras_on,
            camera_count=req.camera_count,
        )
        try:
            scene = assemble(layout, catalog, opts)
        except CategoryNotInCatalog as exc:
            raise ApiError(400, "category_not_in_catalog", str(exc))
        return _ok({"scene": scene.to_dict()})

    @app.get("/v1/exemplars/nearest")
    def exemplars_nearest(rl: float, rw: float, k: int = 5):
        if rl <= 0 or rw <= 0 or k < 1:
            raise ApiError(400, "bad_request", "rl, rw must be positive and k >= 1")
        probe = Condition(description="", room=RoomSpec("probe", rl, rw))
        ranked = sorted(
            enumerate(store),
            key=lambda item: (condition_distance(item[1].condition, probe), item[0]),
        )[:k]
        previews = [
            {
                "id": ex.exemplar_id,
                "polarity": ex.polarity.value,
                "room_type": ex.condition.room_type,
                "length": ex.condition.room.length,
                "width": ex.condition.room.width,
                "description": ex.condition.description,
                "css": serialize_layout(ex.layout),
            }
            for _, ex in ranked
        ]
        return _ok({"exemplars": previews})

    if ui_dir is not None:
        # mounted after every /v1 route so the API always wins
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(
    bind_addr: str,
    store_path,
    mode: str,
    fixture_dir=None,
    catalog_path=None,
    ui_dir=None,
) -> None:
    """Run the service; refuses to start live mode without an API key."""
    import uvicorn

    store = ExemplarStore.load(store_path)
    gateway = Gateway(mode=mode, fixture_dir=fixture_dir)  # raises AuthError early
    catalog = Catalog.load(catalog_path) if catalog_path else None
    host, _, port = bind_addr.partition(":")
    app = create_app(store, gateway, catalog, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080), log_level="info")
