"""HTTP service exposing the matching pipeline.

State is directory-backed: projects as table documents, sessions as JSON
documents carrying the frozen match result plus an append-only decision log.
Session state is always recomputed by replaying that log, so a restarted
service reproduces exactly what clients saw before. Every JSON response goes
through the same serializer as the CLI, which keeps equivalent requests
byte-identical across both surfaces.
"""

from __future__ import annotations

import json
import re
import threading
import uuid
from pathlib import Path

from fastapi import Body, FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware

from .errors import (
    ProjectNotFoundError,
    ProviderError,
    SessionNotFoundError,
    TypematchError,
    UsageError,
)
from .matchers import MATCHER_IDS, MatchConfig
from .merge import AggFn, AggregationSpec, aggregate, merge_tables
from .pipeline import (
    match_result_to_document,
    render_json,
    run_label,
    run_match,
    series_to_document,
)
from .reconcile import (
    DEFAULT_CANDIDATE_LIMIT,
    Provider,
    ReconciliationCache,
    parse_provider_spec,
)
from .labeling import DEFAULT_TOP, DEFAULT_Z
from .tabular import ProjectStore, load_table, table_to_csv, table_to_document

DECISION_KINDS = ("accept", "reject", "edit", "reset")


# ---------------------------------------------------------------------------
# session persistence


class SessionStore:
    """Directory-backed store of session documents with per-session locks."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._master = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}

    def _path(self, session_id: str) -> Path:
        if not re.fullmatch(r"[0-9a-f]{12}", session_id):
            raise SessionNotFoundError(f"unknown session id: {session_id!r}")
        return self.root / f"{session_id}.json"

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._master:
            return self._locks.setdefault(session_id, threading.Lock())

    def save(self, doc: dict) -> str:
        session_id = uuid.uuid4().hex[:12]
        self._write(session_id, doc)
        return session_id

    def replace(self, session_id: str, doc: dict) -> None:
        if not self._path(session_id).exists():
            raise SessionNotFoundError(f"unknown session id: {session_id!r}")
        self._write(session_id, doc)

    def _write(self, session_id: str, doc: dict) -> None:
        payload = json.dumps(doc, ensure_ascii=False, indent=2)
        self._path(session_id).write_text(payload, encoding="utf-8")

    def load(self, session_id: str) -> dict:
        path = self._path(session_id)
        if not path.exists():
            raise SessionNotFoundError(f"unknown session id: {session_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))


# ---------------------------------------------------------------------------
# decision log replay


def replay_decisions(
    decisions: list[dict],
) -> dict[tuple[int, int], tuple[str, int | None]]:
    """Fold the append-only log into the current per-pair state.

    Values are (status, edited_target); edited_target is set only for
    "edited" rows, which stand for accepting (source, edited_target) in
    place of the suggested pair.
    """
    state: dict[tuple[int, int], tuple[str, int | None]] = {}
    for entry in decisions:
        key = (entry["pair"][0], entry["pair"][1])
        decision = entry["decision"]
        if decision == "reset":
            state.pop(key, None)
        elif decision == "edit":
            state[key] = ("edited", entry["target"])
        else:
            state[key] = ("accepted" if decision == "accept" else "rejected", None)
    return state


def accepted_pairs(doc: dict) -> list[tuple[int, int]]:
    state = replay_decisions(doc["decisions"])
    out = []
    for (source, target), (status, edited_target) in state.items():
        if status == "accepted":
            out.append((source, target))
        elif status == "edited":
            out.append((source, edited_target))
    return sorted(out)


def session_view(session_id: str, doc: dict) -> dict:
    """Client-facing session document: candidates with review status."""
    state = replay_decisions(doc["decisions"])
    suggested = {(p["source"], p["target"]) for p in doc["result"]["pairs"]}

    def _pair_view(source: int, target: int, base: dict, added: bool) -> dict:
        status, edited_target = state.get((source, target), ("pending", None))
        view = {**base, "status": status, "added": added}
        if status == "edited":
            view["edited_target"] = edited_target
        return view

    pairs = [
        _pair_view(p["source"], p["target"], p, added=False)
        for p in doc["result"]["pairs"]
    ]
    for key in sorted(k for k in state if k not in suggested):
        base = {
            "source": key[0],
            "target": key[1],
            "scores": {},
            "combined": None,
        }
        pairs.append(_pair_view(key[0], key[1], base, added=True))
    return {
        "session": session_id,
        "source": doc["source"],
        "target": doc["target"],
        "config": doc["config"],
        "pairs": pairs,
        "mapping": doc["result"]["mapping"],
        "decisions": doc["decisions"],
        "merged_project": doc.get("merged_project"),
    }


# ---------------------------------------------------------------------------
# request parsing helpers


def _expect_str(payload: dict, key: str) -> str:
    value = payload.get(key)
    if not isinstance(value, str) or not value:
        raise UsageError(f"{key!r} must be a non-empty string")
    return value


def _expect_int(value: object, name: str, default: int | None = None) -> int:
    if value is None and default is not None:
        return default
    if not isinstance(value, int) or isinstance(value, bool):
        raise UsageError(f"{name} must be an integer")
    return value


def _expect_number(value: object, name: str, default: float) -> float:
    if value is None:
        return default
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise UsageError(f"{name} must be a number")
    return float(value)


def _parse_query_int(value: str | None, name: str, default: int | None = None) -> int:
    if value is None:
        if default is None:
            raise UsageError(f"query parameter {name!r} is required")
        return default
    try:
        return int(value)
    except ValueError as exc:
        raise UsageError(f"query parameter {name!r} must be an integer") from exc


def _parse_query_float(value: str | None, name: str, default: float) -> float:
    if value is None:
        return default
    try:
        return float(value)
    except ValueError as exc:
        raise UsageError(f"query parameter {name!r} must be a number") from exc


def _parse_query_bool(value: str | None, name: str, default: bool) -> bool:
    if value is None:
        return default
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise UsageError(f"query parameter {name!r} must be true or false")


def _validated_pair(payload: dict, doc: dict) -> tuple[int, int]:
    pair = payload.get("pair")
    if (
        not isinstance(pair, list)
        or len(pair) != 2
        or any(isinstance(v, bool) or not isinstance(v, int) for v in pair)
    ):
        raise UsageError("'pair' must be a [source, target] pair of column positions")
    source, target = pair
    if not 0 <= source < doc["source_columns"]:
        raise UsageError(f"source column {source} is out of range")
    if not 0 <= target < doc["target_columns"]:
        raise UsageError(f"target column {target} is out of range")
    return source, target


# ---------------------------------------------------------------------------
# application factory


def create_app(
    data_dir: str | Path,
    default_provider: Provider | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    data_dir = Path(data_dir)
    projects = ProjectStore(data_dir / "projects")
    sessions = SessionStore(data_dir / "sessions")
    cache = ReconciliationCache(data_dir / "cache")

    app = FastAPI(title="typematch", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _json(document: dict, status: int = 200) -> Response:
        return Response(
            content=render_json(document),
            status_code=status,
            media_type="application/json",
        )

    def _error(status: int, message: str) -> Response:
        return _json({"error": message}, status=status)

    @app.exception_handler(TypematchError)
    def _domain_error(request: Request, exc: TypematchError) -> Response:
        if isinstance(exc, (ProjectNotFoundError, SessionNotFoundError)):
            status = 404
        elif isinstance(exc, ProviderError):
            status = 502
        else:
            status = 400
        return _error(status, str(exc))

    @app.exception_handler(RequestValidationError)
    def _validation_error(request: Request, exc: RequestValidationError) -> Response:
        return _error(400, "malformed request body")

    def _resolve_provider(spec: str | None, required: bool) -> Provider | None:
        if spec is not None:
            return parse_provider_spec(spec)
        if default_provider is None and required:
            raise UsageError("no reconciliation provider is configured")
        return default_provider

    # -- health ------------------------------------------------------------

    @app.get("/health")
    def health() -> Response:
        return _json({"status": "ok"})

    # -- projects ----------------------------------------------------------

    @app.post("/projects")
    async def create_project(request: Request) -> Response:
        name = request.query_params.get("name", "table")
        has_header = _parse_query_bool(
            request.query_params.get("has_header"), "has_header", True
        )
        table = load_table(await request.body(), has_header=has_header, name=name)
        project_id = projects.save(table)
        return _json({"project": project_id, **table_to_document(table)}, status=201)

    @app.get("/projects")
    def list_projects() -> Response:
        entries = []
        for project_id in projects.ids():
            table = projects.load(project_id)
            entries.append(
                {
                    "project": project_id,
                    "name": table.name,
                    "headers": table.headers,
                    "rows": table.row_count,
                }
            )
        return _json({"projects": entries})

    @app.get("/projects/{project_id}")
    def get_project(project_id: str) -> Response:
        table = projects.load(project_id)
        return _json({"project": project_id, **table_to_document(table)})

    @app.get("/projects/{project_id}/csv")
    def get_project_csv(project_id: str) -> Response:
        table = projects.load(project_id)
        return Response(
            content=table_to_csv(table), media_type="text/csv; charset=utf-8"
        )

    @app.get("/projects/{project_id}/aggregate")
    def aggregate_project(project_id: str, request: Request) -> Response:
        params = request.query_params
        x_column = _parse_query_int(params.get("x"), "x")
        y_column = _parse_query_int(params.get("y"), "y")
        fn_name = params.get("fn")
        if fn_name is None:
            raise UsageError("query parameter 'fn' is required")
        try:
            fn = AggFn(fn_name)
        except ValueError as exc:
            choices = ", ".join(f.value for f in AggFn)
            raise UsageError(f"unknown fn {fn_name!r}; choose from {choices}") from exc
        table = projects.load(project_id)
        series = aggregate(table, AggregationSpec(x_column=x_column, y_column=y_column, fn=fn))
        return _json(series_to_document(series))

    @app.get("/projects/{project_id}/labels")
    def label_project(project_id: str, request: Request) -> Response:
        params = request.query_params
        column = _parse_query_int(params.get("column"), "column")
        k = _parse_query_int(params.get("k"), "k", DEFAULT_CANDIDATE_LIMIT)
        z = _parse_query_float(params.get("z"), "z", DEFAULT_Z)
        top_m = _parse_query_int(params.get("top"), "top", DEFAULT_TOP)
        provider = _resolve_provider(params.get("provider"), required=True)
        table = projects.load(project_id)
        doc = run_label(table, column, provider, k=k, z=z, top_m=top_m, cache=cache)
        return _json(doc)

    # -- sessions ----------------------------------------------------------

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)) -> Response:
        source_id = _expect_str(payload, "source")
        target_id = _expect_str(payload, "target")
        cfg = payload.get("config") or {}
        if not isinstance(cfg, dict):
            raise UsageError("'config' must be an object")
        matchers = cfg.get("matchers", list(MATCHER_IDS))
        if not isinstance(matchers, list) or not all(
            isinstance(m, str) for m in matchers
        ):
            raise UsageError("'matchers' must be a list of matcher names")
        threshold = _expect_number(cfg.get("threshold"), "threshold", 0.5)
        k = _expect_int(cfg.get("k"), "k", DEFAULT_CANDIDATE_LIMIT)
        provider_spec = cfg.get("provider")
        if provider_spec is not None and not isinstance(provider_spec, str):
            raise UsageError("'provider' must be a string")
        config = MatchConfig(matchers=tuple(matchers), threshold=threshold)
        provider = _resolve_provider(provider_spec, required=False)

        source = projects.load(source_id)
        target = projects.load(target_id)
        result = run_match(source, target, config, provider=provider, k=k, cache=cache)
        doc = {
            "source": source_id,
            "target": target_id,
            "source_columns": len(source.columns),
            "target_columns": len(target.columns),
            "config": {
                "matchers": list(config.matchers),
                "threshold": config.threshold,
                "k": k,
                "provider": provider_spec,
            },
            "result": match_result_to_document(result),
            "decisions": [],
            "merged_project": None,
        }
        session_id = sessions.save(doc)
        return _json(session_view(session_id, doc), status=201)

    @app.get("/sessions")
    def list_sessions() -> Response:
        return _json({"sessions": sessions.ids()})

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> Response:
        doc = sessions.load(session_id)
        return _json(session_view(session_id, doc))

    @app.get("/sessions/{session_id}/matches")
    def get_matches(session_id: str) -> Response:
        doc = sessions.load(session_id)
        return Response(
            content=render_json(doc["result"]), media_type="application/json"
        )

    @app.post("/sessions/{session_id}/decisions")
    def record_decision(session_id: str, payload: dict = Body(...)) -> Response:
        decision = payload.get("decision")
        if decision not in DECISION_KINDS:
            raise UsageError(
                "'decision' must be one of: " + ", ".join(DECISION_KINDS)
            )
        with sessions.lock_for(session_id):
            doc = sessions.load(session_id)
            source, target = _validated_pair(payload, doc)
            entry: dict = {"pair": [source, target], "decision": decision}
            if decision == "edit":
                edited = payload.get("target")
                if isinstance(edited, bool) or not isinstance(edited, int):
                    raise UsageError("'edit' requires an integer 'target' column")
                if not 0 <= edited < doc["target_columns"]:
                    raise UsageError(f"target column {edited} is out of range")
                entry["target"] = edited
            doc["decisions"].append(entry)
            sessions.replace(session_id, doc)
            return _json(session_view(session_id, doc))

    @app.post("/sessions/{session_id}/merge")
    def merge_session(session_id: str, payload: dict | None = Body(None)) -> Response:
        include_unmatched = True
        if payload is not None:
            flag = payload.get("include_unmatched", True)
            if not isinstance(flag, bool):
                raise UsageError("'include_unmatched' must be a boolean")
            include_unmatched = flag
        with sessions.lock_for(session_id):
            doc = sessions.load(session_id)
            mapping = accepted_pairs(doc)
            if not mapping:
                raise UsageError("no accepted pairs; review the session first")
            source = projects.load(doc["source"])
            target = projects.load(doc["target"])
            merged = merge_tables(
                source, target, mapping, include_unmatched=include_unmatched
            )
            project_id = projects.save(merged.table)
            doc["merged_project"] = project_id
            sessions.replace(session_id, doc)
            return _json({"project": project_id}, status=201)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
