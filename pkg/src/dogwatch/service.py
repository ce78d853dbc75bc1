"""HTTP front end: a thin, stateless wrapper around a model snapshot.

Every request gets a fresh session, so client state (sticky assumptions)
stays client-side.  Query problems map to 400 with structured diagnostics,
capacity limits to 422.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .errors import DogwatchError, ParseError
from .limits import Limits
from .model import Attribution, Dog
from .session import Session
from .textfmt import model_to_json, parse_model
from .validate import validate


class QueryIn(BaseModel):
    doglang: str


class ModelIn(BaseModel):
    model: str


def load_snapshot(path: str | Path) -> tuple[Dog, Attribution]:
    text = Path(path).read_text(encoding="utf-8")
    dog, attribution = parse_model(text)
    report = validate(dog, attribution)
    if not report.ok:
        raise DogwatchError("model validation failed:\n" + report.render())
    return dog, attribution


def create_app(model_path: str | Path, limits: Limits | None = None) -> FastAPI:
    dog, attribution = load_snapshot(model_path)
    limits = limits or Limits()
    app = FastAPI(title="dogwatch", version="0.1.0")
    # Browser clients are served from their own origin; the API itself is
    # read-only over a local model, so any origin may call it.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.snapshot = (dog, attribution)

    @app.get("/health")
    def health() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.get("/model")
    def model() -> JSONResponse:
        snap_dog, snap_attr = app.state.snapshot
        return JSONResponse(model_to_json(snap_dog, snap_attr))

    @app.post("/query")
    def query(body: QueryIn) -> JSONResponse:
        snap_dog, snap_attr = app.state.snapshot
        session = Session(snap_dog, snap_attr, limits)
        result = session.run_text(body.doglang)
        if result.ok:
            return JSONResponse(result.to_json())
        status = 422 if result.error_kind == "capacity" else 400
        return JSONResponse(result.to_json(), status_code=status)

    @app.post("/validate")
    def validate_model(body: ModelIn) -> JSONResponse:
        try:
            candidate, candidate_attr = parse_model(body.model)
        except ParseError as err:
            return JSONResponse({
                "valid": False,
                "violations": [dict(d.to_json(), rule="syntax")
                               for d in err.diagnostics],
            })
        report = validate(candidate, candidate_attr)
        return JSONResponse(report.to_json())

    return app
