"""HTTP session service for interactive embedding refinement.

A session wraps one dataset (distance kernel, optional labels) plus an
append-only triplet store and the latest embedding. Creating a session runs
a synchronous triplet-free embedding; screen submissions append triplets;
re-embedding runs on a background thread, warm-started from the current
coordinates with a small seeded jitter so the view deforms instead of
jumping.

Concurrency contract: one re-embed per session at a time. While one runs,
reads serve the previous revision, and both new submissions and a second
re-embed are refused with 409 rather than queued. The revision counter
increments exactly once per completed re-embed. All state is in memory and
dies with the process.

Error bodies are always {"error": "..."} with the usual status codes (404
unknown session or dataset, 400 invalid payloads, 409 busy).
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, replace

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from .affinity import affinity_matrix
from .io import embedding_csv, load_features, load_kernel, load_labels, triplets_csv
from .kernels import euclidean_kernel
from .optimize import embed
from .triplets import expand_selection
from .types import (
    DistanceKernel,
    Embedding,
    EmbedConfig,
    LabelVector,
    TripletSet,
    index_of,
)

WARM_JITTER = 1e-6


class BusyError(RuntimeError):
    pass


@dataclass(frozen=True)
class Dataset:
    name: str
    kernel: DistanceKernel
    labels: LabelVector | None = None


def build_default_datasets(
    features_path: str | None = None,
    kernel_path: str | None = None,
    labels_path: str | None = None,
) -> dict[str, Dataset]:
    """One dataset named 'default' from CLI-style file arguments."""
    if kernel_path is not None:
        kernel = load_kernel(kernel_path)
    elif features_path is not None:
        kernel = euclidean_kernel(load_features(features_path))
    else:
        raise ValueError("need a features or kernel file")
    labels = load_labels(labels_path, kernel.ids) if labels_path else None
    return {"default": Dataset("default", kernel, labels)}


_CONFIG_KEYS = {
    "lambda": "triplet_weight",
    "alpha": "alpha",
    "perplexity": "perplexity",
    "iters": "total_iters",
    "exaggeration_iters": "exaggeration_iters",
    "seed": "seed",
}


def _apply_config(cfg: EmbedConfig, overrides: dict) -> EmbedConfig:
    fields = {}
    for key, value in overrides.items():
        if key not in _CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}")
        if key == "lambda" and value == "auto":
            value = None
        fields[_CONFIG_KEYS[key]] = value
    try:
        return replace(cfg, **fields)
    except (ValueError, TypeError) as e:
        raise ValueError(f"invalid config: {e}") from None


class Session:
    """Mutable per-session state; the lock guards every read and transition."""

    def __init__(self, sid: str, dataset: Dataset, cfg: EmbedConfig):
        self.id = sid
        self.dataset = dataset
        self.cfg = cfg
        self.index = index_of(dataset.kernel.ids)
        self.p = affinity_matrix(dataset.kernel, cfg.perplexity)
        self.rows: list[np.ndarray] = []
        self.revision = 1
        self.status = "idle"
        self.error: str | None = None
        self.lock = threading.Lock()
        self.thread: threading.Thread | None = None
        first_cfg = replace(cfg, triplet_weight=0.0)
        self.embedding, _ = embed(dataset.kernel, TripletSet.empty(), first_cfg, p=self.p)

    def triplet_set(self) -> TripletSet:
        if not self.rows:
            return TripletSet.empty()
        return TripletSet(np.array(self.rows, dtype=np.int64))

    def state_payload(self) -> dict:
        with self.lock:
            payload = {
                "ids": list(self.embedding.ids),
                "coords": self.embedding.coords.tolist(),
                "revision": self.revision,
                "status": self.status,
                "tripletCount": len(self.rows),
            }
            if self.dataset.labels is not None:
                payload["labels"] = [int(v) for v in self.dataset.labels.labels]
            if self.error is not None:
                payload["error"] = self.error
        return payload

    def submit_selection(self, ref: str, selected: list[str], shown: list[str]) -> int:
        def resolve(oid):
            if oid not in self.index:
                raise ValueError(f"unknown id {oid!r}")
            return self.index[oid]

        t = expand_selection(resolve(ref), [resolve(s) for s in selected],
                             [resolve(g) for g in shown])
        with self.lock:
            if self.status == "embedding":
                raise BusyError("re-embedding in progress, submission refused")
            self.rows.extend(np.asarray(row, dtype=np.int64) for row in t.indices)
            return len(t)

    def start_reembed(self, overrides: dict) -> int:
        with self.lock:
            if self.status == "embedding":
                raise BusyError("re-embedding already in progress")
            cfg = _apply_config(self.cfg, overrides)
            if cfg.perplexity != self.cfg.perplexity:
                p = affinity_matrix(self.dataset.kernel, cfg.perplexity)
            else:
                p = self.p
            self.cfg = cfg
            self.p = p
            triplets = self.triplet_set()
            run_cfg = cfg if len(triplets) else replace(cfg, triplet_weight=0.0)
            rng = np.random.default_rng([run_cfg.seed, self.revision])
            warm = self.embedding.coords + rng.normal(
                0.0, WARM_JITTER, self.embedding.coords.shape
            )
            self.status = "embedding"
            self.error = None
            next_revision = self.revision + 1

        def work():
            try:
                y, _ = embed(self.dataset.kernel, triplets, run_cfg, y0=warm, p=p)
            except Exception as e:  # surfaced via status, not a crashed thread
                with self.lock:
                    self.status = "error"
                    self.error = str(e)
            else:
                with self.lock:
                    self.embedding = y
                    self.revision += 1
                    self.status = "idle"

        self.thread = threading.Thread(target=work, daemon=True)
        self.thread.start()
        return next_revision

    def export_payload(self) -> dict:
        with self.lock:
            return {
                "triplets_csv": triplets_csv(self.triplet_set(), self.embedding.ids),
                "embedding_csv": embedding_csv(self.embedding),
            }


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        return {}
    try:
        body = json.loads(raw)
    except ValueError:
        raise HTTPException(400, "request body is not valid JSON")
    if not isinstance(body, dict):
        raise HTTPException(400, "request body must be a JSON object")
    return body


def create_app(datasets: dict[str, Dataset], static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="ktembed")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(HTTPException)
    async def http_error(request, exc):
        return JSONResponse({"error": str(exc.detail)}, status_code=exc.status_code)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request, exc):
        return JSONResponse({"error": str(exc)}, status_code=400)

    def get_session(sid: str) -> Session:
        with registry_lock:
            if sid not in sessions:
                raise HTTPException(404, f"unknown session {sid!r}")
            return sessions[sid]

    @app.get("/health")
    async def health():
        return PlainTextResponse("ok")

    @app.post("/sessions")
    async def create_session(request: Request):
        body = await _json_body(request)
        name = body.get("dataset", "default")
        if name not in datasets:
            raise HTTPException(404, f"unknown dataset {name!r}")
        try:
            cfg = _apply_config(EmbedConfig(), body.get("config", {}))
            session = Session(uuid.uuid4().hex[:12], datasets[name], cfg)
        except ValueError as e:
            raise HTTPException(400, str(e))
        with registry_lock:
            sessions[session.id] = session
        return {"id": session.id, **session.state_payload()}

    @app.get("/sessions/{sid}")
    async def get_state(sid: str):
        return get_session(sid).state_payload()

    @app.post("/sessions/{sid}/selections")
    async def post_selection(sid: str, request: Request):
        session = get_session(sid)
        body = await _json_body(request)
        try:
            ref = body["ref"]
            selected = list(body["selected"])
            shown = list(body["shown"])
        except (KeyError, TypeError):
            raise HTTPException(400, "payload needs ref, selected, shown")
        try:
            added = session.submit_selection(ref, selected, shown)
        except BusyError as e:
            raise HTTPException(409, str(e))
        except ValueError as e:
            raise HTTPException(400, str(e))
        with session.lock:
            total = len(session.rows)
        return {"added": added, "tripletCount": total}

    @app.post("/sessions/{sid}/reembed")
    async def post_reembed(sid: str, request: Request):
        session = get_session(sid)
        body = await _json_body(request)
        overrides = body.get("config", body)
        overrides = {k: v for k, v in overrides.items() if k in _CONFIG_KEYS}
        try:
            revision = session.start_reembed(overrides)
        except BusyError as e:
            raise HTTPException(409, str(e))
        except ValueError as e:
            raise HTTPException(400, str(e))
        return JSONResponse({"status": "embedding", "revision": revision},
                            status_code=202)

    @app.get("/sessions/{sid}/export")
    async def export(sid: str):
        return get_session(sid).export_payload()

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
