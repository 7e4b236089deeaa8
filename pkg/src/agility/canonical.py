"""Canonical JSON forms shared by hashing, persistence and exports."""

from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(doc: Any) -> str:
    """Compact, key-sorted JSON; the form all content hashes are taken over."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def pretty_json(doc: Any) -> str:
    """Key-sorted, indented JSON with a trailing newline; the on-disk file form."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sha256_of(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode("utf-8")).hexdigest()
