"""Stateful HTTP session service.

Sessions pin an immutable base snapshot; jobs transform the session's current
snapshot and append to its history, so chained workflows (remove one concept,
then inspect another) compose naturally.  All payloads are JSON; embeddings
export as plain text.  Errors: 400 malformed upload, 404 unknown
session/name/token, 409 violated job invariants, 422 unresolvable word sets
(with the complete missing-token list).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from . import bundled, wordlists as wl
from .metrics import WeatSets
from .store import (
    EmbeddingError,
    EmbeddingFormatError,
    EmbeddingSnapshot,
    PairedWordSet,
    UnknownTokenError,
    WordSet,
    cosine_to_all,
    export_embedding,
    load_embedding,
    nearest_neighbors,
)
from .subspace import SubspaceError
from .transforms import (
    DebiasJob,
    JobValidationError,
    MetricConfig,
    TransformError,
    resolve_direction,
)
from .views import StepTrace, ViewError, build_trace, trace_to_dict

_FORMAT_ALIASES = {
    "glove": "glove_text",
    "glove_text": "glove_text",
    "word2vec": "word2vec_text",
    "word2vec_text": "word2vec_text",
}


@dataclass
class Session:
    session_id: str
    base: EmbeddingSnapshot
    current: EmbeddingSnapshot
    history: list[tuple[DebiasJob, StepTrace]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


class UploadPayload(BaseModel):
    format: str
    content: str


class CreateSessionPayload(BaseModel):
    embedding: str | None = None
    upload: UploadPayload | None = None


class SubspacePayload(BaseModel):
    method: str
    label: str = "concept"
    seeds: list[str] | None = None
    seeds_f: list[str] | None = None
    seeds_m: list[str] | None = None
    pairs: list[list[str]] | None = None
    k: int = Field(default=10, ge=1)
    iterative_rounds: int = 2
    iterative_tolerance: float = 1e-3


class MetricsPayload(BaseModel):
    weat_x: list[str] | None = None
    weat_y: list[str] | None = None
    weat_a: list[str] | None = None
    weat_b: list[str] | None = None
    ect_attributes: list[str] | None = None


class JobPayload(BaseModel):
    method: str
    subspace_method: str
    evaluation: list[str]
    seeds: list[str] | None = None
    seeds_f: list[str] | None = None
    seeds_m: list[str] | None = None
    seed_pairs: list[list[str]] | None = None
    equalize: list[list[str]] | None = None
    second_seeds: list[str] | None = None
    label: str = "concept"
    second_label: str = "second concept"
    inlp_max_iters: int = 35
    inlp_accuracy_floor: float = 0.55
    iterative_rounds: int = 2
    iterative_tolerance: float = 1e-3
    hd_scope_all: bool = True
    metrics: MetricsPayload | bool | None = None


def _pairs(raw: list[list[str]] | None) -> PairedWordSet | None:
    if raw is None:
        return None
    cleaned = []
    for pair in raw:
        if len(pair) != 2:
            raise JobValidationError(f"pair {pair!r} must have exactly two tokens")
        cleaned.append((pair[0], pair[1]))
    return PairedWordSet(tuple(cleaned))


def _word_set(label: str, tokens: list[str] | None) -> WordSet | None:
    return None if tokens is None else WordSet(label, tuple(tokens))


def _metric_config(payload: MetricsPayload | bool | None) -> MetricConfig | None:
    if payload is None or payload is False:
        return None
    if payload is True:
        payload = MetricsPayload()
    return MetricConfig(
        weat_sets=WeatSets(
            x=WordSet("X", tuple(payload.weat_x) if payload.weat_x else wl.WEAT_MALE.tokens),
            y=WordSet("Y", tuple(payload.weat_y) if payload.weat_y else wl.WEAT_FEMALE.tokens),
            a=WordSet("A", tuple(payload.weat_a) if payload.weat_a else wl.OCCUPATIONS_MALE.tokens),
            b=WordSet("B", tuple(payload.weat_b) if payload.weat_b else wl.OCCUPATIONS_FEMALE.tokens),
        ),
        ect_attributes=WordSet(
            "attributes",
            tuple(payload.ect_attributes) if payload.ect_attributes else wl.OCCUPATIONS_ALL.tokens,
        ),
    )


def _job_from_payload(p: JobPayload) -> DebiasJob:
    return DebiasJob(
        method=p.method,
        subspace_method=p.subspace_method,
        evaluation=WordSet("Evaluation", tuple(p.evaluation)),
        seed_pool=_word_set("Seeds", p.seeds),
        seeds_f=_word_set("Female seed", p.seeds_f),
        seeds_m=_word_set("Male seed", p.seeds_m),
        seed_pairs=_pairs(p.seed_pairs),
        equalize=_pairs(p.equalize),
        second_seeds=_word_set("Second seed", p.second_seeds),
        label=p.label,
        second_label=p.second_label,
        inlp_max_iters=p.inlp_max_iters,
        inlp_accuracy_floor=p.inlp_accuracy_floor,
        iterative_weat=wl.DEFAULT_WEAT if p.subspace_method == "iterative" else None,
        iterative_rounds=p.iterative_rounds,
        iterative_tolerance=p.iterative_tolerance,
        hd_scope_all=p.hd_scope_all,
        metrics=_metric_config(p.metrics),
    )


def create_app(registry_path=None) -> FastAPI:
    """Build the service; ``registry_path`` overrides the embedding registry."""
    app = FastAPI(title="debiaskit", version="0.1.0")
    registry = bundled.load_registry(registry_path)
    snapshots: dict[str, EmbeddingSnapshot] = {}
    sessions: dict[str, Session] = {}
    counter = itertools.count(1)
    sessions_lock = threading.Lock()

    def registered_snapshot(name: str) -> EmbeddingSnapshot:
        if name not in snapshots:
            snapshots[name] = bundled.load_by_name(name, registry)
        return snapshots[name]

    def get_session(session_id: str) -> Session:
        try:
            return sessions[session_id]
        except KeyError:
            raise LookupError(f"unknown session: {session_id}") from None

    @app.exception_handler(UnknownTokenError)
    async def _unknown_token(request: Request, exc: UnknownTokenError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"message": str(exc), "missing": exc.missing}},
        )

    @app.exception_handler(EmbeddingFormatError)
    async def _format_error(request: Request, exc: EmbeddingFormatError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(JobValidationError)
    async def _job_error(request: Request, exc: JobValidationError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(LookupError)
    async def _lookup_error(request: Request, exc: LookupError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    for kind in (SubspaceError, TransformError, ViewError, EmbeddingError):
        @app.exception_handler(kind)
        async def _engine_error(request: Request, exc: Exception):
            return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.get("/embeddings")
    def list_embeddings():
        return {"embeddings": sorted(registry)}

    @app.post("/sessions", status_code=201)
    def create_session(payload: CreateSessionPayload):
        if (payload.embedding is None) == (payload.upload is None):
            return JSONResponse(
                status_code=400,
                content={"detail": "provide exactly one of 'embedding' or 'upload'"},
            )
        if payload.embedding is not None:
            if payload.embedding not in registry:
                raise LookupError(f"unknown embedding: {payload.embedding}")
            base = registered_snapshot(payload.embedding)
        else:
            fmt = _FORMAT_ALIASES.get(payload.upload.format)
            if fmt is None:
                raise EmbeddingFormatError(f"unknown format: {payload.upload.format!r}")
            base = load_embedding(payload.upload.content, fmt)
        session_id = f"s{next(counter):06d}"
        with sessions_lock:
            sessions[session_id] = Session(session_id=session_id, base=base, current=base)
        return {
            "session_id": session_id,
            "vocab_size": len(base),
            "dim": base.dim,
            "snapshot_id": base.snapshot_id,
        }

    @app.get("/sessions/{session_id}")
    def session_info(session_id: str):
        s = get_session(session_id)
        return {
            "session_id": s.session_id,
            "vocab_size": len(s.current),
            "dim": s.current.dim,
            "base_snapshot_id": s.base.snapshot_id,
            "current_snapshot_id": s.current.snapshot_id,
            "jobs_run": len(s.history),
        }

    @app.post("/sessions/{session_id}/subspace")
    def subspace_summary(session_id: str, payload: SubspacePayload):
        s = get_session(session_id)
        job = DebiasJob(
            method="lp",
            subspace_method=payload.method,
            evaluation=WordSet("Evaluation", ()),
            seed_pool=_word_set("Seeds", payload.seeds),
            seeds_f=_word_set("Female seed", payload.seeds_f),
            seeds_m=_word_set("Male seed", payload.seeds_m),
            seed_pairs=_pairs(payload.pairs),
            label=payload.label,
            iterative_weat=wl.DEFAULT_WEAT if payload.method == "iterative" else None,
            iterative_rounds=payload.iterative_rounds,
            iterative_tolerance=payload.iterative_tolerance,
        )
        direction = resolve_direction(s.current, job)
        k = min(payload.k, len(s.current))
        sims = cosine_to_all(s.current, direction.v)
        order = np.lexsort((np.arange(len(sims)), -sims))
        positive = [[s.current.tokens[i], float(sims[i])] for i in order[:k]]
        order_neg = np.lexsort((np.arange(len(sims)), sims))
        negative = [[s.current.tokens[i], float(sims[i])] for i in order_neg[:k]]
        return {
            "method": direction.method,
            "label": direction.label,
            "positive_neighbors": positive,
            "negative_neighbors": negative,
        }

    @app.post("/sessions/{session_id}/jobs", status_code=201)
    def run_session_job(session_id: str, payload: JobPayload):
        s = get_session(session_id)
        job = _job_from_payload(payload)
        with s.lock:
            trace = build_trace(s.current, job)
            s.history.append((job, trace))
            s.current = trace.output
        body = trace_to_dict(trace)
        return {
            "trace": body,
            "metrics_before": body["metrics_before"],
            "metrics_after": body["metrics_after"],
            "current_snapshot_id": trace.output.snapshot_id,
        }

    @app.get("/sessions/{session_id}/neighbors")
    def neighbors(
        session_id: str,
        token: str,
        k: int = Query(default=10, ge=1),
        state: str = Query(default="after", pattern="^(before|after)$"),
    ):
        s = get_session(session_id)
        snap = s.base if state == "before" else s.current
        if token not in snap:
            raise LookupError(f"unknown token: {token}")
        k = min(k, len(snap) - 1)
        result = nearest_neighbors(snap, token, k)
        return {
            "token": token,
            "state": state,
            "snapshot_id": snap.snapshot_id,
            "neighbors": [[t, sim] for t, sim in result],
        }

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str, format: str = "glove_text"):
        s = get_session(session_id)
        fmt = _FORMAT_ALIASES.get(format)
        if fmt is None:
            raise EmbeddingFormatError(f"unknown format: {format!r}")
        data = export_embedding(s.current, fmt)
        return PlainTextResponse(content=data, media_type="text/plain; charset=utf-8")

    @app.post("/sessions/{session_id}/reset")
    def reset(session_id: str):
        s = get_session(session_id)
        with s.lock:
            s.current = s.base
        return {"session_id": s.session_id, "snapshot_id": s.current.snapshot_id}

    @app.get("/presets")
    def presets():
        return {"presets": PRESETS}

    return app


def _tokens(ws: WordSet) -> list[str]:
    return list(ws.tokens)


# Predefined examples for the UI picker: one per debiasing mechanism plus the
# royalty exploration.
PRESETS = [
    {
        "name": "gender / linear projection",
        "job": {
            "method": "lp",
            "subspace_method": "two_means",
            "seeds_f": _tokens(wl.LP_SEEDS_F),
            "seeds_m": _tokens(wl.LP_SEEDS_M),
            "evaluation": _tokens(wl.LP_EVALUATION),
            "label": "gender",
            "metrics": True,
        },
    },
    {
        "name": "gender / hard debiasing",
        "job": {
            "method": "hd",
            "subspace_method": "two_means",
            "seeds_f": ["she", "woman"],
            "seeds_m": ["he", "man"],
            "equalize": [["boy", "girl"], ["sister", "brother"]],
            "evaluation": _tokens(wl.HD_EVALUATION),
            "label": "gender",
            "metrics": True,
        },
    },
    {
        "name": "gender / iterated nullspace projection",
        "job": {
            "method": "inlp",
            "subspace_method": "classifier_normal",
            "seeds_f": _tokens(wl.INLP_FEMALE),
            "seeds_m": _tokens(wl.INLP_MALE),
            "evaluation": ["engineer", "nurse", "receptionist", "scientist"],
            "label": "gender",
            "metrics": True,
        },
    },
    {
        "name": "gender vs occupation / orthogonal correction",
        "job": {
            "method": "oscar",
            "subspace_method": "pca",
            "seeds_f": ["she", "her", "hers", "woman"],
            "seeds_m": ["he", "his", "him", "man"],
            "second_seeds": _tokens(wl.ROTATION_OCCUPATION_SEEDS),
            "evaluation": _tokens(wl.ROTATION_EVALUATION),
            "label": "gender",
            "second_label": "occupation",
            "metrics": True,
        },
    },
    {
        "name": "royalty / linear projection",
        "job": {
            "method": "lp",
            "subspace_method": "two_means",
            "seeds_f": _tokens(wl.ROYALTY_SEEDS_ROYAL),
            "seeds_m": _tokens(wl.ROYALTY_SEEDS_COMMON),
            "evaluation": _tokens(wl.ROYALTY_EVALUATION),
            "label": "royalty",
        },
    },
]
