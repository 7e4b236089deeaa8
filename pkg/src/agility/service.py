"""HTTP service consumed by the coach console.

Thin JSON-over-HTTP layer: every endpoint calls the same engine operations
the CLI uses and returns the same document shapes, so the two surfaces stay
in lockstep. State lives in the session store directory; per-session writes
serialize on the session file lock.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Callable, Iterator

from contextlib import contextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .errors import (
    EngineError,
    ParseError,
    PolicyConflictError,
    ProvisionalScoreError,
    SessionLockError,
    SessionStateError,
    StageOrderError,
)
from .index_model import MeasurementIndex, serialize_index
from .pipeline import AssessmentSession, LevelPolicy, indicator_stages
from .persistence import (
    catalog_index_path,
    import_responses,
    list_indices,
    load_index_file,
    load_session,
    new_session,
    save_session,
    session_lock,
)
from .reporting import ExportFormat, ReportKind, build_report, export

ENV_STORE = "AGILITY_STORE"
ENV_INDEX_DIR = "AGILITY_INDEX_DIR"
ENV_BIND = "AGILITY_BIND"
ENV_TOKEN = "AGILITY_TOKEN"

_STATUS_BY_CODE: dict[str, int] = {
    StageOrderError.code: 409,
    SessionLockError.code: 409,
    PolicyConflictError.code: 409,
    SessionStateError.code: 409,
    ProvisionalScoreError.code: 422,
}

_MEDIA_TYPES = {
    ExportFormat.JSON: "application/json",
    ExportFormat.MARKDOWN: "text/markdown; charset=utf-8",
    ExportFormat.CSV: "text/csv; charset=utf-8",
}


class _NotFound(EngineError):
    code = "not_found"


def _status_for(error: EngineError) -> int:
    if isinstance(error, _NotFound):
        return 404
    return _STATUS_BY_CODE.get(error.code, 400)


def build_app(
    store_dir: str | Path,
    index_dir: str | Path,
    token: str | None = None,
) -> FastAPI:
    """Assemble the service around a session store and an index catalog."""
    store = Path(store_dir)
    indices = Path(index_dir)
    app = FastAPI(title="agility", docs_url=None, redoc_url=None)

    @app.exception_handler(EngineError)
    async def _engine_error(_request: Request, error: EngineError) -> JSONResponse:
        return JSONResponse(status_code=_status_for(error), content=error.to_dict())

    @app.middleware("http")
    async def _auth(request: Request, call_next: Callable) -> Response:
        if token:
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {token}":
                return JSONResponse(
                    status_code=401,
                    content={"code": "auth", "message": "missing or invalid bearer token"},
                )
        if request.method in ("POST", "PUT", "PATCH"):
            content_type = request.headers.get("content-type", "")
            body = await request.body()
            if body and not content_type.lower().startswith("application/json"):
                return JSONResponse(
                    status_code=400,
                    content={"code": "content_type", "message": "request body must be JSON"},
                )
        return await call_next(request)

    def session_path(session_id: str) -> Path:
        path = store / f"{session_id}.json"
        if not path.is_file():
            raise _NotFound(f"unknown session: {session_id}")
        return path

    def read_session(session_id: str) -> AssessmentSession:
        return load_session(session_path(session_id), index_dir=indices)

    @contextmanager
    def writable_session(session_id: str) -> Iterator[AssessmentSession]:
        """Load under the advisory lock and save on clean exit."""
        path = session_path(session_id)
        with session_lock(path):
            session = load_session(path, index_dir=indices)
            yield session
            save_session(session, path)

    async def body_of(request: Request) -> Any:
        raw = await request.body()
        if not raw:
            return {}
        try:
            return json.loads(raw)
        except ValueError as exc:
            raise ParseError(f"request body is not valid JSON: {exc}") from exc

    # -- indices --

    @app.get("/indices")
    async def get_indices() -> JSONResponse:
        entries = [
            {"name": e["name"], "version": e["version"]} for e in list_indices(indices)
        ]
        return JSONResponse({"indices": entries})

    @app.get("/indices/{name}/{version}")
    async def get_index(name: str, version: str) -> JSONResponse:
        path = catalog_index_path(indices, name, version)
        if not path.is_file():
            raise _NotFound(f"unknown index: {name}@{version}")
        return JSONResponse(serialize_index(load_index_file(path)))

    # -- sessions --

    @app.post("/sessions", status_code=201)
    async def post_session(request: Request) -> JSONResponse:
        body = await body_of(request)
        ref = body.get("index") or {}
        name, version = ref.get("name"), ref.get("version")
        if not name or not version:
            raise ParseError("session creation needs index name and version")
        path = catalog_index_path(indices, name, version)
        if not path.is_file():
            raise _NotFound(f"unknown index: {name}@{version}")
        index = load_index_file(path)
        policy = LevelPolicy(body.get("policy", LevelPolicy.PAPER_LITERAL.value))
        session = new_session(index, source=path, policy=policy)
        store.mkdir(parents=True, exist_ok=True)
        save_session(session, store / f"{session.id}.json")
        return JSONResponse(status_code=201, content=session.to_doc())

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str) -> JSONResponse:
        return JSONResponse(read_session(session_id).to_doc())

    @app.post("/sessions/{session_id}/answers")
    async def post_answers(session_id: str, request: Request) -> JSONResponse:
        body = await body_of(request)
        if isinstance(body, dict):
            body = [body]
        if not isinstance(body, list):
            raise ParseError("answers must be an object or an array of objects")
        with writable_session(session_id) as session:
            report = import_responses(session, json.dumps(body))
        return JSONResponse(report)

    @app.post("/sessions/{session_id}/stages/{stage}")
    async def post_stage(session_id: str, stage: str, request: Request) -> JSONResponse:
        if stage not in ("1", "2", "3", "4"):
            raise _NotFound(f"unknown stage: {stage}")
        body = await body_of(request)
        with writable_session(session_id) as session:
            result = session.run_or_rerun(
                int(stage),
                option=body.get("option"),
                policy=body.get("policy"),
                extend_above_target=bool(body.get("extend_above_target", False)),
            )
        return JSONResponse(result.to_dict())

    @app.post("/sessions/{session_id}/whatif")
    async def post_whatif(session_id: str, request: Request) -> JSONResponse:
        body = await body_of(request)
        overrides_in = body.get("overrides", {})
        if isinstance(overrides_in, list):
            overrides = {
                entry["characteristic_id"]: entry["percentage"] for entry in overrides_in
            }
        elif isinstance(overrides_in, dict):
            overrides = {cid: float(pct) for cid, pct in overrides_in.items()}
        else:
            raise ParseError("overrides must be an object or an array")
        session = read_session(session_id)
        stage3, stage4 = session.what_if(overrides, option=body.get("option"))
        return JSONResponse({"stage3": stage3.to_dict(), "stage4": stage4.to_dict()})

    @app.post("/sessions/{session_id}/close")
    async def post_close(session_id: str) -> JSONResponse:
        with writable_session(session_id) as session:
            session.close()
            doc = session.to_doc()
        return JSONResponse(doc)

    @app.get("/sessions/{session_id}/reports/{kind}")
    async def get_report(session_id: str, kind: str, format: str = "json") -> Response:
        try:
            report_kind = ReportKind(kind)
        except ValueError:
            raise _NotFound(f"unknown report kind: {kind}") from None
        try:
            export_format = ExportFormat(format)
        except ValueError:
            raise ParseError(f"unknown export format: {format}") from None
        session = read_session(session_id)
        payload = export(build_report(session, report_kind), export_format)
        return Response(content=payload, media_type=_MEDIA_TYPES[export_format])

    @app.get("/sessions/{session_id}/progress")
    async def get_progress(session_id: str) -> JSONResponse:
        session = read_session(session_id)
        return JSONResponse(progress_report(session))

    return app


def progress_report(session: AssessmentSession) -> dict[str, Any]:
    """Per-role unanswered-indicator queue for the questionnaire walkthrough.

    Includes a live band snapshot per characteristic so the console can show
    achievement updating as answers arrive without doing any scoring itself.
    """
    from .scoring import score_characteristic

    index: MeasurementIndex = session.index
    answered = session.responses.answered_indicator_ids()
    by_role: dict[str, dict[str, int]] = {
        role.value: {"total": 0, "unanswered": 0} for role in
        sorted({i.respondent_role for i in index.indicators}, key=lambda r: r.value)
    }
    queue = []
    for indicator in index.indicators:
        role = indicator.respondent_role.value
        by_role.setdefault(role, {"total": 0, "unanswered": 0})
        by_role[role]["total"] += 1
        if indicator.id in answered:
            continue
        by_role[role]["unanswered"] += 1
        stages = indicator_stages(index, indicator.id)
        owners = index.practices_owning(indicator.characteristic.id)
        level = min((p.level.rank for p in owners), default=0)
        queue.append({
            "indicator_id": indicator.id,
            "question": indicator.question,
            "role": role,
            "answer_kind": indicator.answer_kind.value,
            "characteristic_id": indicator.characteristic.id,
            "characteristic": indicator.characteristic.description,
            "stages": list(stages),
            "level": level or None,
        })
    queue.sort(key=lambda q: (
        min(q["stages"]) if q["stages"] else 9,
        q["level"] or 0,
        q["characteristic_id"],
        q["indicator_id"],
    ))
    bands = {}
    for characteristic in index.characteristics:
        score = score_characteristic(characteristic, index, session.responses)
        bands[characteristic.id] = {
            "description": characteristic.description,
            "scope": characteristic.scope.value,
            "controllable": characteristic.controllable,
            "percentage": round(score.percentage, 2),
            "band": score.band.name,
            "answered": score.answered,
            "expected": score.expected,
            "provisional": score.provisional,
        }
    return {
        "session": session.id,
        "state": session.state.value,
        "total_indicators": len(index.indicators),
        "unanswered_total": len(queue),
        "by_role": by_role,
        "queue": queue,
        "bands": bands,
    }


def app_from_env() -> FastAPI:
    """Build the app from AGILITY_STORE / AGILITY_INDEX_DIR / AGILITY_TOKEN."""
    store = os.environ.get(ENV_STORE, "./sessions")
    index_dir = os.environ.get(ENV_INDEX_DIR, "./indices")
    token = os.environ.get(ENV_TOKEN) or None
    return build_app(store, index_dir, token)
