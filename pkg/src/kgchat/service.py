"""HTTP session service exposing the engine to the web client.

Sessions live in memory with idle eviction. Asks on one session are
serialized by a per-session lock; different sessions proceed
concurrently over the shared read-only graph and vector table.

Endpoints (JSON bodies):

* ``POST /sessions`` {mode, q0, oracle_inputs?} -> {session_id, turn0}
* ``POST /sessions/{id}/ask`` {question, overrides?} -> turn record
* ``GET /sessions/{id}/context`` -> context snapshot
* ``GET /sessions/{id}/history`` -> all turn records
* ``DELETE /sessions/{id}``
* ``GET /healthz``

Errors come back as ``{"code": ..., "message": ...}``; a turn that
cannot be answered returns a structured failure payload and preserves
the session.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import replace
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .answers import AnswerHyperparams, RankedAnswers
from .embeddings import WordVectorTable
from .engine import (
    FirstTurnMode,
    Session,
    SessionConfig,
    TurnFailure,
    TurnRecord,
    start_session,
)
from .frontier import FrontierHyperparams
from .kg import KnowledgeGraph
from .linking import FirstTurnError

__all__ = ["create_app", "SessionStore"]

DEFAULT_TTL_SECONDS = 30 * 60
SNAPSHOT_NODE_CAP = 500


class CreateSessionRequest(BaseModel):
    mode: str = "oracle"
    q0: str
    oracle_entities: Optional[list[str]] = None
    oracle_answers: Optional[list[str]] = None


class AskRequest(BaseModel):
    question: str
    r: Optional[int] = Field(default=None, ge=1)
    hf1: Optional[float] = None
    hf2: Optional[float] = None
    hf3: Optional[float] = None
    ha1: Optional[float] = None


class SessionStore:
    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl = ttl_seconds
        self._lock = threading.Lock()
        self._sessions: dict[str, tuple[Session, threading.Lock, float]] = {}

    def put(self, session: Session) -> str:
        session_id = uuid.uuid4().hex[:12]
        with self._lock:
            self._sessions[session_id] = (session, threading.Lock(), time.monotonic())
        return session_id

    def get(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._lock:
            self._evict_expired()
            if session_id not in self._sessions:
                raise KeyError(session_id)
            session, lock, _ = self._sessions[session_id]
            self._sessions[session_id] = (session, lock, time.monotonic())
            return session, lock

    def drop(self, session_id: str) -> bool:
        with self._lock:
            return self._sessions.pop(session_id, None) is not None

    def _evict_expired(self) -> None:
        now = time.monotonic()
        stale = [
            sid
            for sid, (_, _, touched) in self._sessions.items()
            if now - touched > self.ttl
        ]
        for sid in stale:
            del self._sessions[sid]

    def __len__(self) -> int:
        with self._lock:
            self._evict_expired()
            return len(self._sessions)


def _ranking_payload(g: KnowledgeGraph, ranked: RankedAnswers, limit: int = 5) -> dict:
    return {
        "top_group": [
            {"node": n, "label": g.nodes[n].label, "external_id": g.nodes[n].external_id}
            for n in sorted(ranked.top_group)
        ],
        "entries": [
            {
                "node": e.node,
                "label": g.nodes[e.node].label,
                "external_id": g.nodes[e.node].external_id,
                "score": e.score,
                "rank": e.rank,
                "frontier_term": e.frontier_term,
                "context_term": e.context_term,
            }
            for e in ranked.entries[:limit]
        ],
    }


def _record_payload(g: KnowledgeGraph, record: TurnRecord) -> dict:
    return {
        "turn": record.turn,
        "question": record.question,
        "frontiers": [
            {
                "node": fs.node,
                "label": g.nodes[fs.node].label,
                "match": fs.match,
                "proximity": fs.prox,
                "prior": fs.prior,
                "combined": fs.combined,
            }
            for fs in record.frontiers
        ],
        "answers": _ranking_payload(g, record.answers),
        "elapsed_ms": record.elapsed_ms,
    }


def _resolve_ids(g: KnowledgeGraph, items: list[str], what: str) -> list[int]:
    out: list[int] = []
    for item in items:
        nodes = sorted(
            n.node_id for n in g.nodes if n.external_id == item
        ) or sorted(g.lookup_label(item))
        if not nodes:
            raise HTTPException(
                status_code=400,
                detail={"code": "unknown_node", "message": f"unknown {what}: {item!r}"},
            )
        out.append(nodes[0])
    return out


def _apply_overrides(cfg: SessionConfig, req: AskRequest) -> SessionConfig:
    fhp = cfg.frontier_hp
    if any(v is not None for v in (req.hf1, req.hf2, req.hf3, req.r)):
        fhp = FrontierHyperparams(
            h1=req.hf1 if req.hf1 is not None else fhp.h1,
            h2=req.hf2 if req.hf2 is not None else fhp.h2,
            h3=req.hf3 if req.hf3 is not None else fhp.h3,
            r=req.r if req.r is not None else fhp.r,
            k=fhp.k,
        )
    ahp = cfg.answer_hp
    if req.ha1 is not None:
        ahp = AnswerHyperparams(h1=req.ha1, h2=1.0 - req.ha1)
    return replace(cfg, frontier_hp=fhp, answer_hp=ahp)


def create_app(
    g: KnowledgeGraph,
    emb: WordVectorTable,
    cfg: SessionConfig = SessionConfig(),
    ttl_seconds: float = DEFAULT_TTL_SECONDS,
    static_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="kgchat", version="0.1.0")
    store = SessionStore(ttl_seconds)
    app.state.store = store

    @app.exception_handler(HTTPException)
    async def _http_error(request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=detail)

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "nodes": g.node_count,
            "facts": g.fact_count,
            "vocabulary": len(emb),
            "sessions": len(store),
        }

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        try:
            mode = FirstTurnMode(req.mode)
        except ValueError:
            raise HTTPException(
                status_code=400,
                detail={"code": "bad_mode", "message": f"unknown mode {req.mode!r}"},
            )
        session_cfg = replace(cfg, first_turn_mode=mode)
        oracle_inputs = None
        if mode is FirstTurnMode.ORACLE:
            if not req.oracle_entities or not req.oracle_answers:
                raise HTTPException(
                    status_code=400,
                    detail={
                        "code": "missing_oracle_inputs",
                        "message": "oracle mode needs oracle_entities and oracle_answers",
                    },
                )
            oracle_inputs = (
                _resolve_ids(g, req.oracle_entities, "entity"),
                _resolve_ids(g, req.oracle_answers, "answer"),
            )
        try:
            session = start_session(g, emb, session_cfg, req.q0, oracle_inputs)
        except (FirstTurnError, ValueError) as exc:
            raise HTTPException(
                status_code=400,
                detail={"code": "first_turn_failed", "message": str(exc)},
            )
        session_id = store.put(session)
        return {
            "session_id": session_id,
            "turn0": _record_payload(g, session.records[0]),
        }

    def _session_or_404(session_id: str) -> tuple[Session, threading.Lock]:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(
                status_code=404,
                detail={"code": "unknown_session", "message": session_id},
            )

    @app.post("/sessions/{session_id}/ask")
    def ask(session_id: str, req: AskRequest):
        session, lock = _session_or_404(session_id)
        with lock:
            original = session.cfg
            try:
                session.cfg = _apply_overrides(original, req)
            except ValueError as exc:
                session.cfg = original
                raise HTTPException(
                    status_code=400,
                    detail={"code": "bad_hyperparams", "message": str(exc)},
                )
            try:
                record = session.ask(req.question)
            except TurnFailure as exc:
                return JSONResponse(
                    status_code=200,
                    content={
                        "turn_failed": True,
                        "message": str(exc),
                        "turn": session.turn,
                    },
                )
            finally:
                session.cfg = original
        return _record_payload(g, record)

    @app.get("/sessions/{session_id}/context")
    def context(session_id: str):
        session, lock = _session_or_404(session_id)
        with lock:
            return session.snapshot(SNAPSHOT_NODE_CAP)

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str):
        session, lock = _session_or_404(session_id)
        with lock:
            return {
                "session_id": session_id,
                "turn": session.turn,
                "records": [_record_payload(g, r) for r in session.records],
            }

    @app.delete("/sessions/{session_id}")
    def delete(session_id: str):
        if not store.drop(session_id):
            raise HTTPException(
                status_code=404,
                detail={"code": "unknown_session", "message": session_id},
            )
        return {"deleted": session_id}

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
