"""HTTP API for annotation sessions and theme naming.

Serves the browser UI: session creation, per-annotator task queues, label
and resolution submission, live agreement reports, and theme-name edits.
All writes go through the single-writer label store.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .annotate import LabelStore, SessionMode
from .errors import (
    ForeignAnnotator,
    KeySetMismatch,
    UnassignedRecord,
    UnknownSession,
    VidreqError,
)
from .model import CorpusManifest, load_bundle
from .relevance import Label
from .themes import load_product_artifact, with_names


class SessionRequest(BaseModel):
    mode: str
    annotators: list[str]
    record_ids: list[str]


class LabelRequest(BaseModel):
    record_id: str
    annotator: str
    label: str


class ResolutionRequest(BaseModel):
    record_id: str
    label: str


class ThemeNameRequest(BaseModel):
    name: str


_STATUS = {
    UnknownSession: 404,
    ForeignAnnotator: 403,
    UnassignedRecord: 409,
    KeySetMismatch: 409,
}


def create_app(
    store: LabelStore,
    manifest: CorpusManifest,
    bundles_dir,
    themes_dir,
) -> FastAPI:
    app = FastAPI(title="vidreq annotation API")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    records = manifest.by_id()
    bundles_dir = Path(bundles_dir)
    themes_dir = Path(themes_dir)

    @app.exception_handler(VidreqError)
    async def on_error(request, exc: VidreqError):
        status = _STATUS.get(type(exc), 400)
        return JSONResponse(
            status_code=status, content={"error": type(exc).__name__, "detail": str(exc)}
        )

    @app.exception_handler(ValueError)
    async def on_value_error(request, exc: ValueError):
        return JSONResponse(
            status_code=400, content={"error": "ValidationError", "detail": str(exc)}
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/api/sessions", status_code=201)
    def create_session(body: SessionRequest):
        session_id = store.create_session(
            SessionMode(body.mode), body.annotators, body.record_ids
        )
        return {"session_id": session_id}

    @app.get("/api/sessions/{session_id}/next")
    def next_task(session_id: str, annotator: str):
        pending = store.pending_records(session_id, annotator)
        if not pending:
            return Response(status_code=204)
        record_id = pending[0]
        record = records.get(record_id)
        bundle_path = bundles_dir / f"{record_id}.json"
        bundle = load_bundle(bundle_path) if bundle_path.is_file() else None
        return {
            "record_id": record_id,
            "title": record.title if record else "",
            "description": record.description if record else "",
            "audio_text": bundle.audio_text if bundle else "",
            "visual_lines": (
                [[line.ts_s, line.text] for line in bundle.visual_lines] if bundle else []
            ),
            "platform": record.platform.value if record else "",
            "remaining": len(pending),
        }

    @app.post("/api/sessions/{session_id}/labels", status_code=201)
    def submit_label(session_id: str, body: LabelRequest):
        store.record_label(session_id, body.record_id, body.annotator, Label(body.label))
        return {"stored": True}

    @app.get("/api/sessions/{session_id}/agreement")
    def agreement(session_id: str):
        return store.agreement(session_id).to_dict()

    @app.post("/api/sessions/{session_id}/resolutions", status_code=201)
    def submit_resolution(session_id: str, body: ResolutionRequest):
        store.record_resolution(session_id, body.record_id, Label(body.label))
        return {"stored": True}

    def _theme_entries() -> list[dict]:
        names = store.theme_names()
        entries = []
        if themes_dir.is_dir():
            for path in sorted(themes_dir.glob("*.json")):
                if path.name in {"summary.json", "rollup.json"}:
                    continue
                _, clusters = load_product_artifact(path)
                for cluster in with_names(clusters, names):
                    entries.append(
                        {
                            "cluster_key": f"{cluster.product}:{cluster.cluster_id}",
                            "product": cluster.product,
                            "cluster_id": cluster.cluster_id,
                            "size": len(cluster.record_ids),
                            "record_ids": list(cluster.record_ids),
                            "top_terms": [[t, s] for t, s in cluster.top_terms],
                            "theme_name": cluster.theme_name,
                        }
                    )
        return entries

    @app.get("/api/themes")
    def list_themes():
        return {"themes": _theme_entries()}

    @app.post("/api/themes/{cluster_key}/name", status_code=201)
    def name_theme(cluster_key: str, body: ThemeNameRequest):
        product, _, cluster_id = cluster_key.rpartition(":")
        if not product or not cluster_id.isdigit():
            raise ValueError(f"cluster key must be '<product>:<cluster_id>', got {cluster_key!r}")
        known = {e["cluster_key"] for e in _theme_entries()}
        if cluster_key not in known:
            raise HTTPException(status_code=404, detail=f"no cluster {cluster_key!r}")
        if not body.name.strip():
            raise ValueError("theme name must be non-empty")
        store.set_theme_name(product, int(cluster_id), body.name.strip())
        return {"stored": True}

    return app
