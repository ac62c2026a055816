"""Local HTTP API hosting the co-creative derivation loop.

Sessions are in-memory: one grammar and one production each, mutations
serialized per session. Every response that carries a production also
carries its content hash so clients can verify they render exactly the
server state.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .corpus import bundled_corpus
from .enclosure import enforce
from .errors import (
    ConflictingPlacementError,
    NothingToUndoError,
    UnknownIdError,
    UnsupportedSpecError,
    VoxgramError,
)
from .grammar import ShapeGrammar, grammar_from_doc, grammar_to_doc, induce
from .inference import (
    InferenceParams,
    SearchOps,
    hill_climb,
    shape_set_from_doc,
    shape_set_to_doc,
)
from .model import VoxelModel, load_model, model_from_doc, model_to_doc
from .production import (
    Production,
    apply_choice,
    fingerprint,
    generate,
    production_to_doc,
    start,
    step_choices,
    to_model,
    undo,
)
from .shapes import ShapeSpec


@dataclass
class Session:
    grammar: ShapeGrammar
    production: Production
    lock: threading.Lock = field(default_factory=threading.Lock)


def _production_payload(p: Production) -> dict:
    doc = production_to_doc(p)
    blocks = [
        {"shape": ps.shape, "class": ps.cls, "pose": ps.pose.to_doc(),
         "blocks": [{"t": k, "p": list(pos)} for pos, k in sorted(ps.cells.items())]}
        for ps in p.placed
    ]
    return {"production": doc, "placed_blocks": blocks, "hash": fingerprint(p)}


def _choice_payload(index: int, c) -> dict:
    return {
        "index": index,
        "target": c.target,
        "rule_index": c.rule_index,
        "rule": {
            "lhs_class": c.rule.lhs_class,
            "lhs_anchor": c.rule.lhs_anchor,
            "rhs": c.rule.rhs,
        },
        "pose": c.pose.to_doc(),
        "blocks": [{"t": k, "p": list(pos)} for pos, k in sorted(c.cells.items())],
        "conflict": c.conflict,
        "duplicate": c.duplicate,
    }


def _inference_params(payload: dict) -> InferenceParams:
    try:
        spec = ShapeSpec(payload.get("spec", "rect"))
    except ValueError:
        raise VoxgramError(f"unknown spec {payload.get('spec')!r}") from None
    try:
        ops = SearchOps(payload.get("ops", "merge"))
    except ValueError:
        raise VoxgramError(f"unknown ops {payload.get('ops')!r}") from None
    alpha = payload.get("alpha", 1.0)
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool) or alpha < 0:
        raise VoxgramError("alpha must be a non-negative number")
    max_steps = payload.get("max_steps")
    if max_steps is not None and (not isinstance(max_steps, int) or max_steps < 0):
        raise VoxgramError("max_steps must be a non-negative integer")
    return InferenceParams(
        spec=spec,
        alpha=float(alpha),
        ops=ops,
        overlap=bool(payload.get("overlap", False)),
        plateau_merges=bool(payload.get("plateau", True)),
        max_steps=max_steps,
    )


def create_app(corpus_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="voxgram", version="0.1.0")
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()
    ids = itertools.count(1)

    corpus: dict[str, VoxelModel] = {}
    if corpus_dir:
        for path in sorted(Path(corpus_dir).glob("*.json")):
            m = load_model(path.read_text(), as_example=True)
            corpus[m.name] = m
    else:
        for m in bundled_corpus():
            corpus[m.name] = m

    def get_session(sid: str) -> Session:
        with store_lock:
            if sid not in sessions:
                raise UnknownIdError(f"no session {sid!r}")
            return sessions[sid]

    @app.exception_handler(VoxgramError)
    async def voxgram_error(_req: Request, exc: VoxgramError):
        if isinstance(exc, ConflictingPlacementError):
            code = 409
        elif isinstance(exc, UnknownIdError):
            code = 404
        else:
            code = 400
        return JSONResponse(status_code=code, content={"detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def malformed_request(_req: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": f"malformed request: {exc.errors()[:1]}"})

    # ------------------------------------------------------------- sessions

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        grammar_doc = payload.get("grammar")
        if grammar_doc is None:
            raise VoxgramError("a 'grammar' document is required")
        g = grammar_from_doc(grammar_doc)
        initial = payload.get("initial")
        seed = payload.get("seed", 0)
        if not isinstance(seed, int):
            raise VoxgramError("seed must be an integer")
        p = start(g, initial=initial, seed=seed)
        with store_lock:
            sid = f"s{next(ids)}"
            sessions[sid] = Session(g, p)
        return {"id": sid, "seed": seed, **_production_payload(p)}

    @app.get("/sessions/{sid}")
    def get_session_state(sid: str):
        session = get_session(sid)
        return {
            "id": sid,
            "grammar": grammar_to_doc(session.grammar),
            **_production_payload(session.production),
        }

    @app.get("/sessions/{sid}/choices")
    def get_choices(sid: str):
        session = get_session(sid)
        p = session.production
        return {
            "choices": [_choice_payload(i, c) for i, c in enumerate(step_choices(p))],
            "hash": fingerprint(p),
        }

    @app.post("/sessions/{sid}/apply")
    def post_apply(sid: str, payload: dict = Body(...)):
        session = get_session(sid)
        choice = payload.get("choice")
        if not isinstance(choice, int):
            raise VoxgramError("'choice' must be an integer index")
        with session.lock:
            before = session.production
            try:
                session.production = apply_choice(before, choice)
            except UnknownIdError as exc:
                # a stale index is a client error, not a missing resource
                return JSONResponse(status_code=400, content={"detail": str(exc)})
            applied = session.production is not before
        return {"applied": applied, **_production_payload(session.production)}

    @app.post("/sessions/{sid}/undo")
    def post_undo(sid: str):
        session = get_session(sid)
        with session.lock:
            try:
                session.production = undo(session.production)
            except NothingToUndoError as exc:
                return JSONResponse(status_code=400, content={"detail": str(exc)})
        return _production_payload(session.production)

    @app.post("/sessions/{sid}/enclosure")
    def post_enclosure(sid: str):
        session = get_session(sid)
        with session.lock:
            before = session.production
            try:
                session.production = enforce(before)
            except UnsupportedSpecError as exc:
                return JSONResponse(status_code=400, content={"detail": str(exc)})
            removed = len(before.placed) - len(session.production.placed)
        return {"removed": removed, **_production_payload(session.production)}

    @app.get("/sessions/{sid}/model")
    def get_model(sid: str):
        session = get_session(sid)
        return model_to_doc(to_model(session.production))

    # ------------------------------------------------------------- stateless

    @app.post("/infer")
    def post_infer(payload: dict = Body(...)):
        model_doc = payload.get("model")
        if model_doc is None:
            raise VoxgramError("a 'model' document is required")
        model = model_from_doc(model_doc, as_example=True)
        params = _inference_params(payload)
        shape_set = hill_climb(model, params)
        return shape_set_to_doc(shape_set)

    @app.post("/induce")
    def post_induce(payload: dict = Body(...)):
        raw_sets = payload.get("sets")
        if not isinstance(raw_sets, list) or not raw_sets:
            raise VoxgramError("a non-empty 'sets' list is required")
        sets = [shape_set_from_doc(doc) for doc in raw_sets]
        g = induce(sets, initial=payload.get("initial"))
        return grammar_to_doc(g)

    @app.post("/generate")
    def post_generate(payload: dict = Body(...)):
        grammar_doc = payload.get("grammar")
        if grammar_doc is None:
            raise VoxgramError("a 'grammar' document is required")
        g = grammar_from_doc(grammar_doc)
        seed = payload.get("seed", 0)
        max_steps = payload.get("max_steps", 20)
        if not isinstance(seed, int) or not isinstance(max_steps, int) or max_steps < 0:
            raise VoxgramError("seed and max_steps must be integers (max_steps >= 0)")
        p = generate(g, seed=seed, max_steps=max_steps, initial=payload.get("initial"))
        removed = 0
        if payload.get("enclosure"):
            kept = enforce(p)
            removed = len(p.placed) - len(kept.placed)
            p = kept
        return {
            "seed": seed,
            "removed": removed,
            "model": model_to_doc(to_model(p)),
            **_production_payload(p),
        }

    # --------------------------------------------------------------- corpus

    @app.get("/corpus")
    def list_corpus():
        return {"models": sorted(corpus)}

    @app.get("/corpus/{name}")
    def get_corpus_model(name: str):
        if name not in corpus:
            raise UnknownIdError(f"no corpus model {name!r}")
        return model_to_doc(corpus[name])

    return app
