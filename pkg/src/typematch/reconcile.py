"""Reconciliation: resolving cell text to ranked semantic-type candidates.

A provider answers "what kinds of thing could this string name?" with scored
type candidates. Two providers are included: a JSON fixture for offline and
test use, and an HTTP client for a live endpoint. Lookups are cached per
(provider, text, k) because real providers are slow and columns repeat
values; annotation of a column runs lookups concurrently but produces a
deterministic result.
"""

from __future__ import annotations

import hashlib
import json
import threading
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol
from urllib.parse import urlencode

import requests

from .errors import (
    ProviderProtocolError,
    ProviderTransportError,
    UsageError,
)
from .tabular import Column, ColumnKind

DEFAULT_CANDIDATE_LIMIT = 5
DEFAULT_WORKERS = 8


@dataclass(frozen=True)
class TypeCandidate:
    """One scored semantic type proposed for a cell."""

    type_id: str
    display_name: str
    score: float

    def __post_init__(self) -> None:
        if not self.type_id:
            raise UsageError("candidate type_id must be non-empty")
        if self.score < 0:
            raise UsageError("candidate score must be non-negative")


@dataclass(frozen=True)
class CellAnnotation:
    """Ranked candidates for one cell's text. Candidates are unique per
    type id and sorted by score descending."""

    cell_text: str
    candidates: tuple[TypeCandidate, ...]


@dataclass(frozen=True)
class ColumnAnnotation:
    """Annotations for a column, keyed by row index.

    Exactly the rows whose cells are non-empty after trimming appear here;
    empty cells are never sent to a provider.
    """

    position: int
    cells: dict[int, CellAnnotation]


class Provider(Protocol):
    provider_id: str

    def search(self, text: str, limit: int) -> list[TypeCandidate]: ...


class FixtureProvider:
    """Candidate lookup from a JSON file of the form
    {"entries": {"<cell text>": [{"id", "name", "score"}, ...]}}.

    Lookup keys are matched case-insensitively after trimming. Unknown text
    yields an empty list, which is a normal answer, not an error.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.provider_id = f"fixture:{self.path}"
        try:
            doc = json.loads(self.path.read_text(encoding="utf-8"))
            entries = doc["entries"]
        except OSError as exc:
            raise ProviderTransportError(f"cannot read fixture: {exc}") from exc
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ProviderProtocolError(f"malformed fixture: {exc}") from exc
        self._entries: dict[str, list[TypeCandidate]] = {}
        for key, raw in entries.items():
            self._entries[key.strip().lower()] = [_candidate_from_wire(c) for c in raw]

    def search(self, text: str, limit: int) -> list[TypeCandidate]:
        return list(self._entries.get(text.strip().lower(), []))


class HttpProvider:
    """Candidate lookup against GET <base>/search?query=...&limit=...

    The endpoint must answer 2xx with {"result": [{"id", "name", "score"},
    ...]}. Connection problems and non-2xx statuses raise
    ProviderTransportError (retryable); well-delivered garbage raises
    ProviderProtocolError.
    """

    def __init__(self, base_url: str, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.provider_id = f"http:{self.base_url}"
        self.timeout = timeout
        self._session = requests.Session()

    def search(self, text: str, limit: int) -> list[TypeCandidate]:
        url = f"{self.base_url}/search?{urlencode({'query': text, 'limit': limit})}"
        try:
            resp = self._session.get(url, timeout=self.timeout)
        except requests.RequestException as exc:
            raise ProviderTransportError(f"provider unreachable: {exc}") from exc
        if not 200 <= resp.status_code < 300:
            raise ProviderTransportError(
                f"provider answered HTTP {resp.status_code}"
            )
        try:
            doc = resp.json()
            raw = doc["result"]
            return [_candidate_from_wire(c) for c in raw]
        except (ValueError, KeyError, TypeError) as exc:
            raise ProviderProtocolError(f"malformed provider response: {exc}") from exc


def _candidate_from_wire(obj: dict) -> TypeCandidate:
    try:
        return TypeCandidate(
            type_id=str(obj["id"]),
            display_name=str(obj["name"]),
            score=float(obj["score"]),
        )
    except (KeyError, TypeError, ValueError, UsageError) as exc:
        raise ProviderProtocolError(f"malformed candidate entry: {obj!r}") from exc


def parse_provider_spec(spec: str) -> FixtureProvider | HttpProvider:
    """Build a provider from "fixture:<path>" or "http:<url>" / a bare URL."""
    if spec.startswith("fixture:"):
        return FixtureProvider(spec[len("fixture:"):])
    if spec.startswith(("http://", "https://")):
        return HttpProvider(spec)
    if spec.startswith("http:"):
        rest = spec[len("http:"):]
        if rest.startswith("//"):
            return HttpProvider("http:" + rest)
        return HttpProvider("http://" + rest)
    raise UsageError(f"unrecognized provider spec: {spec!r}")


def fetch_candidates(
    provider: Provider, cell_text: str, k: int = DEFAULT_CANDIDATE_LIMIT
) -> list[TypeCandidate]:
    """Query a provider for one cell and normalize the answer.

    Duplicate type ids are merged by summing their scores before ranking;
    the result is sorted by score descending (ties by type id) and truncated
    to at most k entries.
    """
    trimmed = cell_text.strip()
    if not trimmed:
        raise UsageError("cell text must be non-empty after trimming")
    if k < 1:
        raise UsageError("candidate limit must be at least 1")
    raw = provider.search(trimmed, k)
    merged: dict[str, TypeCandidate] = {}
    for cand in raw:
        seen = merged.get(cand.type_id)
        if seen is None:
            merged[cand.type_id] = cand
        else:
            merged[cand.type_id] = TypeCandidate(
                type_id=seen.type_id,
                display_name=seen.display_name,
                score=seen.score + cand.score,
            )
    ranked = sorted(merged.values(), key=lambda c: (-c.score, c.type_id))
    return ranked[:k]


class ReconciliationCache:
    """Thread-safe lookup cache keyed by (provider id, trimmed text, k).

    Always caches in memory; give it a directory to persist entries across
    runs as small JSON files named by key hash.
    """

    def __init__(self, directory: str | Path | None = None):
        self._memory: dict[tuple[str, str, int], list[TypeCandidate]] = {}
        self._lock = threading.Lock()
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)

    def _disk_path(self, key: tuple[str, str, int]) -> Path:
        assert self.directory is not None
        digest = hashlib.sha256(repr(key).encode("utf-8")).hexdigest()[:24]
        return self.directory / f"{digest}.json"

    def get(self, key: tuple[str, str, int]) -> list[TypeCandidate] | None:
        with self._lock:
            if key in self._memory:
                return list(self._memory[key])
        if self.directory is not None:
            path = self._disk_path(key)
            if path.exists():
                raw = json.loads(path.read_text(encoding="utf-8"))
                cands = [_candidate_from_wire(c) for c in raw]
                with self._lock:
                    self._memory[key] = cands
                return list(cands)
        return None

    def put(self, key: tuple[str, str, int], value: list[TypeCandidate]) -> None:
        with self._lock:
            self._memory[key] = list(value)
        if self.directory is not None:
            payload = json.dumps(
                [
                    {"id": c.type_id, "name": c.display_name, "score": c.score}
                    for c in value
                ],
                ensure_ascii=False,
            )
            self._disk_path(key).write_text(payload, encoding="utf-8")


def cached_fetch(
    provider: Provider,
    cell_text: str,
    k: int,
    cache: ReconciliationCache | None,
) -> list[TypeCandidate]:
    trimmed = cell_text.strip()
    if cache is None:
        return fetch_candidates(provider, trimmed, k)
    key = (provider.provider_id, trimmed, k)
    hit = cache.get(key)
    if hit is not None:
        return hit
    result = fetch_candidates(provider, trimmed, k)
    cache.put(key, result)
    return result


def annotate_column(
    provider: Provider,
    column: Column,
    k: int = DEFAULT_CANDIDATE_LIMIT,
    cache: ReconciliationCache | None = None,
    max_workers: int = DEFAULT_WORKERS,
) -> ColumnAnnotation:
    """Annotate every non-empty cell of a text column with type candidates.

    Distinct cell texts are looked up once each, concurrently up to
    max_workers at a time; the assembled result depends only on the column's
    contents, never on completion order. The first provider error aborts the
    remaining lookups and propagates.
    """
    if column.kind != ColumnKind.TEXT:
        raise UsageError("only text-kind columns can be annotated")
    row_texts = {
        row: text for row, text in enumerate(column.cells) if text.strip()
    }
    distinct = sorted({text.strip() for text in row_texts.values()})
    results: dict[str, list[TypeCandidate]] = {}
    if distinct:
        workers = max(1, min(max_workers, len(distinct)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                text: pool.submit(cached_fetch, provider, text, k, cache)
                for text in distinct
            }
            done, not_done = wait(futures.values(), return_when=FIRST_EXCEPTION)
            failure = next(
                (f.exception() for f in done if f.exception() is not None), None
            )
            if failure is not None:
                for f in not_done:
                    f.cancel()
                raise failure
        results = {text: fut.result() for text, fut in futures.items()}
    cells = {
        row: CellAnnotation(
            cell_text=text, candidates=tuple(results[text.strip()])
        )
        for row, text in row_texts.items()
    }
    return ColumnAnnotation(position=column.position, cells=cells)
