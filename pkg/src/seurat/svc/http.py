"""Versioned JSON-over-HTTP API for live play and analyses.

All payload models reject unknown fields so golden tests stay honest.
Graph fields accept either a seurat-graph-v1 document or {"example": name}.
"""
from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from ..graphs import graph_from_json, graph_to_json
from .analyses import AnalysisRunner
from .sessions import (
    NotYourTurn,
    SessionError,
    create_session,
    post_move,
    session_hint,
    session_view,
)
from .store import DataStore

_GRAPH_KEYS = {"format", "directed", "n", "edges", "labels"}


def _parse_graph_field(doc: dict) -> dict:
    if set(doc) == {"example"}:
        from ..generators import named_example

        ex = named_example(doc["example"])
        if len(ex.graphs) != 1:
            raise ValueError(f"{doc['example']} names a pair, not a graph")
        return graph_to_json(ex.graphs[0], ex.labels[0] or None)
    unknown = set(doc) - _GRAPH_KEYS
    if unknown:
        raise ValueError(f"unknown graph fields {sorted(unknown)}")
    graph_from_json(doc)  # validates
    return doc


class CreateSessionRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    g: dict
    h: dict
    colours: int = Field(ge=1)
    variant: str = "plain"
    pebble_pairs: int = 0
    human_role: str = "both"
    engine: Optional[dict] = None
    seed: int = 0


class MoveRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    move: Optional[dict] = None
    answer: Optional[dict] = None


class AnalysisRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    params: dict = Field(default_factory=dict)


def create_app(data_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="seurat games service", version="1")
    store = DataStore(data_dir)
    runner = AnalysisRunner(store)

    @app.post("/v1/sessions")
    def sessions_create(req: CreateSessionRequest):
        try:
            request = req.model_dump()
            request["g"] = _parse_graph_field(request["g"])
            request["h"] = _parse_graph_field(request["h"])
            return create_session(store, request)
        except (ValueError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/v1/sessions/{session_id}")
    def sessions_get(session_id: str):
        doc = store.load_session(session_id)
        if doc is None:
            raise HTTPException(status_code=404, detail="no such session")
        return session_view(doc)

    @app.post("/v1/sessions/{session_id}/moves")
    def sessions_move(session_id: str, req: MoveRequest):
        payload = {k: v for k, v in req.model_dump().items() if v is not None}
        try:
            return post_move(store, session_id, payload)
        except KeyError:
            raise HTTPException(status_code=404, detail="no such session")
        except NotYourTurn as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except (SessionError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/v1/sessions/{session_id}/hint")
    def sessions_hint(session_id: str, depth: Optional[int] = None):
        try:
            return session_hint(store, session_id, depth)
        except KeyError:
            raise HTTPException(status_code=404, detail="no such session")
        except SessionError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/v1/analyses")
    def analyses_create(req: AnalysisRequest):
        try:
            params = dict(req.params)
            for field in ("g", "h"):
                if field in params and isinstance(params[field], dict):
                    params[field] = _parse_graph_field(params[field])
            return runner.submit(req.kind, params)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/v1/analyses/{job_id}")
    def analyses_get(job_id: str):
        job = runner.poll(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="no such job")
        return job

    return app
