"""Durable storage: session files, the on-disk index catalog, response import.

Sessions persist as single JSON files pinned to their index by content hash;
saving is atomic (temp file + rename) and a per-file advisory lock keeps the
one-writer rule. The index catalog is a plain directory layout,
`indices/<name>/<version>.json`.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Iterator, Mapping

from contextlib import contextmanager

from filelock import FileLock, Timeout

from .canonical import pretty_json, sha256_of
from .errors import (
    AnswerValueError,
    CorruptFileError,
    EngineError,
    IndexHashMismatchError,
    ParseError,
    SchemaVersionError,
    SessionLockError,
    SessionStateError,
    StorageError,
    UnknownEntityError,
)
from .index_model import AnswerKind, MeasurementIndex, load_index, serialize_index
from .pipeline import AssessmentSession, LevelPolicy

SCHEMA_VERSION = 1

# old schema_version -> migration producing the next version's document.
# There are no historical versions yet; the table exists so older files can
# be upgraded in place once the schema ever changes.
MIGRATIONS: dict[int, Callable[[dict[str, Any]], dict[str, Any]]] = {}

LOCK_TIMEOUT_SECONDS = 10.0


# --- index files and catalog ---------------------------------------------------


def index_content_hash(index: MeasurementIndex) -> str:
    """sha256 over the canonical serialized form (formatting-insensitive)."""
    return sha256_of(serialize_index(index))


def load_index_file(path: str | Path) -> MeasurementIndex:
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read index file {path}: {exc}") from exc
    return load_index(text)


def write_index_file(index_doc: Mapping[str, Any], path: str | Path) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, pretty_json(index_doc).encode("utf-8"))
    except OSError as exc:
        raise StorageError(f"cannot write index file {path}: {exc}") from exc


def catalog_index_path(index_dir: str | Path, name: str, version: str) -> Path:
    return Path(index_dir) / name / f"{version}.json"


def list_indices(index_dir: str | Path) -> list[dict[str, str]]:
    """Entries in the catalog directory, sorted by (name, version)."""
    index_dir = Path(index_dir)
    entries: list[dict[str, str]] = []
    if not index_dir.is_dir():
        return entries
    for name_dir in sorted(p for p in index_dir.iterdir() if p.is_dir()):
        for file in sorted(name_dir.glob("*.json")):
            entries.append({
                "name": name_dir.name,
                "version": file.stem,
                "path": str(file),
            })
    return entries


# --- session files -------------------------------------------------------------


def _atomic_write(path: Path, payload: bytes) -> None:
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def new_session(
    index: MeasurementIndex,
    *,
    source: str | Path | None = None,
    policy: LevelPolicy | str = LevelPolicy.PAPER_LITERAL,
    session_id: str | None = None,
) -> AssessmentSession:
    """Create a session pinned to the given index by content hash."""
    ref = {
        "name": index.name,
        "version": index.version,
        "sha256": index_content_hash(index),
        "source": str(source) if source is not None else None,
    }
    return AssessmentSession(
        index, index_ref=ref, policy=LevelPolicy(policy), session_id=session_id
    )


def save_session(session: AssessmentSession, path: str | Path) -> None:
    """Atomically write the session file; refuses inconsistent sessions."""
    problems = session.validate()
    if problems:
        raise SessionStateError(
            "refusing to persist an inconsistent session", details={"problems": problems}
        )
    doc = {"schema_version": SCHEMA_VERSION, "session": session.to_doc()}
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, pretty_json(doc).encode("utf-8"))
    except OSError as exc:
        raise StorageError(f"cannot write session file {path}: {exc}") from exc


def _migrate(doc: dict[str, Any]) -> dict[str, Any]:
    version = doc.get("schema_version")
    if not isinstance(version, int):
        raise CorruptFileError("session file lacks an integer schema_version")
    while version < SCHEMA_VERSION:
        migration = MIGRATIONS.get(version)
        if migration is None:
            raise SchemaVersionError(
                f"no migration path from session schema {version} to {SCHEMA_VERSION}"
            )
        doc = migration(doc)
        new_version = doc.get("schema_version")
        if not isinstance(new_version, int) or new_version <= version:
            raise SchemaVersionError(
                f"migration from schema {version} did not advance the version"
            )
        version = new_version
    if version > SCHEMA_VERSION:
        raise SchemaVersionError(
            f"session schema {version} is newer than supported {SCHEMA_VERSION}"
        )
    return doc


def resolve_session_index(
    session_doc: Mapping[str, Any],
    *,
    index_dir: str | Path | None = None,
    index_path: str | Path | None = None,
) -> MeasurementIndex:
    """Find and verify the index a session file references.

    Resolution order: explicit path, the catalog directory, then the source
    path recorded when the session was created. Whatever is found must match
    the pinned content hash.
    """
    ref = session_doc["index"]
    candidates: list[Path] = []
    if index_path is not None:
        candidates.append(Path(index_path))
    if index_dir is not None:
        candidates.append(catalog_index_path(index_dir, ref["name"], ref["version"]))
    if ref.get("source"):
        candidates.append(Path(ref["source"]))
    tried: list[str] = []
    for candidate in candidates:
        if not candidate.is_file():
            tried.append(str(candidate))
            continue
        index = load_index_file(candidate)
        actual = index_content_hash(index)
        if actual != ref["sha256"]:
            raise IndexHashMismatchError(
                f"index at {candidate} does not match the hash pinned in the session",
                details={"expected": ref["sha256"], "actual": actual, "path": str(candidate)},
            )
        return index
    raise StorageError(
        f"cannot locate index {ref['name']}@{ref['version']} for the session",
        details={"tried": tried},
    )


def load_session(
    path: str | Path,
    *,
    index: MeasurementIndex | None = None,
    index_dir: str | Path | None = None,
    index_path: str | Path | None = None,
) -> AssessmentSession:
    """Load and fully validate a session file, verifying the index pin."""
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except OSError as exc:
        raise StorageError(f"cannot read session file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptFileError(f"session file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "session" not in doc:
        raise CorruptFileError(f"session file {path} lacks a session payload")
    doc = _migrate(doc)
    session_doc = doc["session"]
    if index is None:
        index = resolve_session_index(session_doc, index_dir=index_dir, index_path=index_path)
    else:
        actual = index_content_hash(index)
        if actual != session_doc["index"]["sha256"]:
            raise IndexHashMismatchError(
                "provided index does not match the hash pinned in the session",
                details={"expected": session_doc["index"]["sha256"], "actual": actual},
            )
    try:
        session = AssessmentSession.from_doc(session_doc, index)
    except (EngineError, KeyError, TypeError, ValueError) as exc:
        raise CorruptFileError(f"session file {path} is inconsistent: {exc}") from exc
    problems = session.validate()
    if problems:
        raise CorruptFileError(
            f"session file {path} violates session invariants",
            details={"problems": problems},
        )
    return session


@contextmanager
def session_lock(path: str | Path, timeout: float = LOCK_TIMEOUT_SECONDS) -> Iterator[None]:
    """Advisory one-writer lock for a session file."""
    lock = FileLock(str(Path(path)) + ".lock")
    try:
        lock.acquire(timeout=timeout)
    except Timeout as exc:
        raise SessionLockError(f"session file {path} is locked by another writer") from exc
    try:
        yield
    finally:
        lock.release()


# --- response import -----------------------------------------------------------

_TRUE_WORDS = {"yes", "true", "y", "1"}
_FALSE_WORDS = {"no", "false", "n", "0"}


def coerce_value(kind: AnswerKind, raw: Any) -> Any:
    """Coerce an imported raw value into the indicator's native value type."""
    if kind is AnswerKind.BINARY:
        if isinstance(raw, bool):
            return raw
        if isinstance(raw, str):
            word = raw.strip().lower()
            if word in _TRUE_WORDS:
                return True
            if word in _FALSE_WORDS:
                return False
        raise AnswerValueError(f"binary value must be yes/no, got {raw!r}")
    if isinstance(raw, bool):
        raise AnswerValueError(f"{kind.value} value must be an integer, got {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        try:
            return int(raw.strip())
        except ValueError:
            raise AnswerValueError(
                f"{kind.value} value must be an integer, got {raw!r}"
            ) from None
    raise AnswerValueError(f"{kind.value} value must be an integer, got {raw!r}")


def parse_response_rows(text: str) -> list[dict[str, Any]]:
    """Parse response rows from CSV or the equivalent JSON array form.

    Row numbering is 1-based over data rows and is carried into rejection
    reports. Raises ParseError only for wholly malformed streams.
    """
    stripped = text.lstrip()
    if not stripped:
        raise ParseError("response stream is empty")
    if stripped.startswith("["):
        try:
            entries = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"response stream is not valid JSON: {exc}") from exc
        if not isinstance(entries, list):
            raise ParseError("JSON response stream must be an array of answers")
        rows = []
        for number, entry in enumerate(entries, start=1):
            if not isinstance(entry, Mapping):
                raise ParseError(f"answer {number} must be an object")
            rows.append({
                "row": number,
                "indicator_id": entry.get("indicator_id"),
                "respondent_id": entry.get("respondent_id"),
                "role": entry.get("role"),
                "value": entry.get("value"),
            })
        return rows
    reader = csv.DictReader(io.StringIO(text))
    required = {"indicator_id", "respondent_id", "role", "value"}
    if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
        raise ParseError(
            "response CSV must have the columns indicator_id, respondent_id, role, value"
        )
    return [
        {
            "row": number,
            "indicator_id": record.get("indicator_id"),
            "respondent_id": record.get("respondent_id"),
            "role": record.get("role"),
            "value": record.get("value"),
        }
        for number, record in enumerate(reader, start=1)
    ]


def import_responses(session: AssessmentSession, source: str | Path) -> dict[str, Any]:
    """Import answers from a CSV/JSON file path or raw text.

    Valid rows are recorded (later duplicates replace earlier ones); invalid
    rows are rejected individually with row-level reasons. Stage results that
    depended on changed answers are invalidated.
    """
    looks_like_path = isinstance(source, Path)
    if isinstance(source, str) and "\n" not in source and not source.lstrip().startswith("["):
        looks_like_path = True
    if looks_like_path:
        try:
            text = Path(source).read_text("utf-8")
        except (OSError, ValueError) as exc:
            raise StorageError(f"cannot read responses from {source}: {exc}") from exc
    else:
        text = str(source)
    raw_rows = parse_response_rows(text)

    rows: list[dict[str, Any]] = []
    pre_rejected: list[dict[str, Any]] = []
    for row in raw_rows:
        indicator_id = row["indicator_id"]
        try:
            kind = session.index.indicator(indicator_id).answer_kind
        except UnknownEntityError:
            rows.append(row)  # recording will reject it with the unknown-indicator code
            continue
        try:
            row = dict(row, value=coerce_value(kind, row["value"]))
        except AnswerValueError as exc:
            pre_rejected.append({
                "row": row["row"],
                "indicator_id": indicator_id,
                "respondent_id": row["respondent_id"],
                "code": exc.code,
                "reason": exc.message,
            })
            continue
        rows.append(row)

    report = session.apply_answers(rows)
    report["rejected"] = sorted(
        report["rejected"] + pre_rejected, key=lambda r: (r["row"] is None, r["row"])
    )
    return report
