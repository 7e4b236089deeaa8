"""Engine error hierarchy.

Every error carries a stable string code so the CLI and HTTP service can map
engine failures one-to-one onto exit codes / status codes without string
matching on messages. `details` holds structured payloads (validation
reports, missing-answer lists, rejected rows).
"""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Base class for all engine-level failures."""

    code = "engine"

    def __init__(self, message: str, *, details: Any = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.details is not None:
            doc["details"] = self.details
        return doc


class ParseError(EngineError):
    """Malformed document: bad JSON/CSV or a shape the schema rejects."""

    code = "parse"


class IndexValidationError(EngineError):
    """Index document parsed but violates index invariants.

    `details` is the full violation report from validate_index.
    """

    code = "index.invalid"


class UnknownEntityError(EngineError):
    """A referenced id does not exist in the index or store."""

    code = "unknown"

    def __init__(self, kind: str, entity_id: str, *, details: Any = None) -> None:
        super().__init__(f"unknown {kind}: {entity_id}", details=details)
        self.code = f"unknown.{kind}"
        self.kind = kind
        self.entity_id = entity_id


class AnswerValueError(EngineError):
    """Answer value outside the indicator's answer_kind range."""

    code = "answer.value"


class AnswerRoleError(EngineError):
    """Answer role differs from the indicator's designated respondent role."""

    code = "answer.role"


class OutOfRangeError(EngineError):
    """Numeric argument outside its documented range (level rank, percentage)."""

    code = "range"


class StageOrderError(EngineError):
    """Stage operation attempted in a state that does not allow it."""

    code = "stage.order"


class ProvisionalScoreError(EngineError):
    """Stage finalization blocked by unanswered indicators.

    `details["missing"]` lists the unanswered indicator ids.
    """

    code = "scores.provisional"

    def __init__(self, message: str, missing: list[str]) -> None:
        super().__init__(message, details={"missing": sorted(missing)})
        self.missing = sorted(missing)


class WhatIfError(EngineError):
    """Invalid what-if override (non-controllable characteristic)."""

    code = "whatif.uncontrollable"


class PolicyConflictError(EngineError):
    """Level policy change would contradict already-computed results."""

    code = "policy.conflict"


class ReportFormatError(EngineError):
    """Unsupported (report kind, export format) pair."""

    code = "report.unsupported"


class StorageError(EngineError):
    """Filesystem failure while persisting or reading."""

    code = "storage"


class CorruptFileError(EngineError):
    """Session or index file exists but cannot be decoded."""

    code = "file.corrupt"


class SchemaVersionError(EngineError):
    """Session file schema_version has no migration path to the current one."""

    code = "schema.version"


class IndexHashMismatchError(EngineError):
    """Resolved index content does not match the hash pinned in the session."""

    code = "index.hash_mismatch"


class SessionLockError(EngineError):
    """Another writer holds the session's advisory lock."""

    code = "session.locked"


class SessionStateError(EngineError):
    """Session-level operation refused (closed session, invariant violation)."""

    code = "session.state"
