"""Measurement index: domain types, file-format parsing, and validation.

An index is immutable once loaded and safe to share across sessions. The
file format is a single JSON document (see data/index.schema.json, the
normative definition); `validate_index` reports every invariant violation as
data, `load_index` refuses documents that carry any.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Any, Mapping

import jsonschema

from . import catalog
from .errors import IndexValidationError, OutOfRangeError, ParseError, UnknownEntityError


class Scope(str, enum.Enum):
    ORGANIZATIONAL = "organizational"
    PROJECT = "project"


class Role(str, enum.Enum):
    MANAGER = "manager"
    DEVELOPER = "developer"
    ASSESSOR = "assessor"


class AnswerKind(str, enum.Enum):
    LIKERT5 = "likert5"
    BINARY = "binary"
    PERCENT = "percent"


@dataclass(frozen=True)
class AgileLevel:
    rank: int
    name: str
    objective: str


@dataclass(frozen=True)
class AgilePrinciple:
    id: str
    name: str


@dataclass(frozen=True)
class Characteristic:
    id: str
    description: str
    scope: Scope
    controllable: bool
    origin: str | None = None


@dataclass(frozen=True)
class Indicator:
    id: str
    question: str
    characteristic: Characteristic
    respondent_role: Role
    answer_kind: AnswerKind
    weight: float = 1.0
    origin: str | None = None


@dataclass(frozen=True)
class Practice:
    id: str
    name: str
    level: AgileLevel
    principle: AgilePrinciple
    limiting: bool
    characteristics: tuple[Characteristic, ...]

    def characteristics_in_scope(self, scope: Scope) -> tuple[Characteristic, ...]:
        return tuple(c for c in self.characteristics if c.scope is scope)


@dataclass(frozen=True)
class DiscontinuingFactor:
    id: str
    name: str
    characteristics: tuple[Characteristic, ...]


@dataclass(frozen=True)
class Violation:
    """One broken validation rule, with the location that broke it."""

    rule: str
    location: str
    message: str

    def to_dict(self) -> dict[str, str]:
        return {"rule": self.rule, "location": self.location, "message": self.message}


@dataclass(frozen=True)
class MeasurementIndex:
    name: str
    version: str
    levels: tuple[AgileLevel, ...]
    principles: tuple[AgilePrinciple, ...]
    characteristics: tuple[Characteristic, ...]
    indicators: tuple[Indicator, ...]
    practices: tuple[Practice, ...]
    factors: tuple[DiscontinuingFactor, ...]

    @cached_property
    def _characteristics_by_id(self) -> dict[str, Characteristic]:
        return {c.id: c for c in self.characteristics}

    @cached_property
    def _indicators_by_id(self) -> dict[str, Indicator]:
        return {i.id: i for i in self.indicators}

    @cached_property
    def _practices_by_id(self) -> dict[str, Practice]:
        return {p.id: p for p in self.practices}

    @cached_property
    def _factors_by_id(self) -> dict[str, DiscontinuingFactor]:
        return {f.id: f for f in self.factors}

    @cached_property
    def _indicators_by_characteristic(self) -> dict[str, tuple[Indicator, ...]]:
        grouped: dict[str, list[Indicator]] = {c.id: [] for c in self.characteristics}
        for ind in self.indicators:
            grouped[ind.characteristic.id].append(ind)
        return {cid: tuple(inds) for cid, inds in grouped.items()}

    @cached_property
    def _principle_order(self) -> dict[str, int]:
        return {p.id: pos for pos, p in enumerate(self.principles)}

    @property
    def max_rank(self) -> int:
        return max(level.rank for level in self.levels)

    def characteristic(self, characteristic_id: str) -> Characteristic:
        try:
            return self._characteristics_by_id[characteristic_id]
        except KeyError:
            raise UnknownEntityError("characteristic", characteristic_id) from None

    def indicator(self, indicator_id: str) -> Indicator:
        try:
            return self._indicators_by_id[indicator_id]
        except KeyError:
            raise UnknownEntityError("indicator", indicator_id) from None

    def practice(self, practice_id: str) -> Practice:
        try:
            return self._practices_by_id[practice_id]
        except KeyError:
            raise UnknownEntityError("practice", practice_id) from None

    def factor(self, factor_id: str) -> DiscontinuingFactor:
        try:
            return self._factors_by_id[factor_id]
        except KeyError:
            raise UnknownEntityError("factor", factor_id) from None

    def indicators_for(self, characteristic_id: str) -> tuple[Indicator, ...]:
        self.characteristic(characteristic_id)
        return self._indicators_by_characteristic.get(characteristic_id, ())

    def practice_sort_key(self, practice: Practice) -> tuple[int, int, str]:
        return (practice.level.rank, self._principle_order[practice.principle.id], practice.id)

    def limiting_practices(self) -> tuple[Practice, ...]:
        return tuple(sorted((p for p in self.practices if p.limiting), key=self.practice_sort_key))

    def practices_owning(self, characteristic_id: str) -> tuple[Practice, ...]:
        return tuple(
            p for p in sorted(self.practices, key=self.practice_sort_key)
            if any(c.id == characteristic_id for c in p.characteristics)
        )


def practices_at_or_below(index: MeasurementIndex, level_rank: int) -> list[Practice]:
    """All practices whose level rank is <= level_rank, ordered by (rank, principle, id)."""
    if not 1 <= level_rank <= index.max_rank:
        raise OutOfRangeError(
            f"level rank {level_rank} outside 1..{index.max_rank}",
            details={"rank": level_rank, "max_rank": index.max_rank},
        )
    selected = [p for p in index.practices if p.level.rank <= level_rank]
    selected.sort(key=index.practice_sort_key)
    return selected


# --- file format ------------------------------------------------------------

_SCHEMA: dict[str, Any] | None = None


def index_schema() -> dict[str, Any]:
    """The published JSON schema for index documents."""
    global _SCHEMA
    if _SCHEMA is None:
        text = resources.files("agility.data").joinpath("index.schema.json").read_text("utf-8")
        _SCHEMA = json.loads(text)
    return _SCHEMA


def _check_shape(doc: Any) -> None:
    validator = jsonschema.Draft202012Validator(index_schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        raise ParseError(
            "index document does not match the index schema",
            details=[
                {"path": "/".join(str(p) for p in err.absolute_path), "message": err.message}
                for err in errors
            ],
        )


def validate_index(candidate: Mapping[str, Any] | MeasurementIndex) -> list[Violation]:
    """Check every index invariant; returns all violations, empty when valid.

    Accepts either a parsed document (dict) or an already-built index (which
    is re-serialized and checked the same way). Structural problems — wrong
    shapes, unknown keys — are ParseErrors, not violations.
    """
    doc = serialize_index(candidate) if isinstance(candidate, MeasurementIndex) else candidate
    _check_shape(doc)
    violations: list[Violation] = []

    def check_duplicates(kind: str, ids: list[Any]) -> None:
        seen: set[Any] = set()
        for value in ids:
            if value in seen:
                violations.append(Violation("id.duplicate", kind, f"duplicate {kind} id {value!r}"))
            seen.add(value)

    levels = doc["levels"]
    ranks = [lv["rank"] for lv in levels]
    check_duplicates("levels", ranks)
    if len(levels) < 2:
        violations.append(Violation(
            "levels.count", "levels",
            f"index has {len(levels)} level(s); at least 2 are required for comparative measurement",
        ))
    if sorted(set(ranks)) != list(range(1, len(set(ranks)) + 1)):
        violations.append(Violation(
            "levels.rank", "levels",
            f"level ranks {sorted(set(ranks))} must form a contiguous range starting at 1",
        ))

    check_duplicates("principles", [p["id"] for p in doc["principles"]])
    check_duplicates("characteristics", [c["id"] for c in doc["characteristics"]])
    check_duplicates("indicators", [i["id"] for i in doc["indicators"]])
    check_duplicates("practices", [p["id"] for p in doc["practices"]])
    check_duplicates("factors", [f["id"] for f in doc["factors"]])

    rank_set = set(ranks)
    principle_ids = {p["id"] for p in doc["principles"]}
    characteristic_by_id = {c["id"]: c for c in doc["characteristics"]}

    for ind in doc["indicators"]:
        if ind["characteristic"] not in characteristic_by_id:
            violations.append(Violation(
                "ref.unresolved", f"indicators/{ind['id']}",
                f"indicator {ind['id']!r} references unknown characteristic {ind['characteristic']!r}",
            ))

    covered = {ind["characteristic"] for ind in doc["indicators"]}
    for cid in characteristic_by_id:
        if cid not in covered:
            violations.append(Violation(
                "indicator.coverage", f"characteristics/{cid}",
                f"characteristic {cid!r} has no indicators, so it can never be assessed",
            ))

    practiced_ranks: set[int] = set()
    for prac in doc["practices"]:
        loc = f"practices/{prac['id']}"
        if prac["level"] not in rank_set:
            violations.append(Violation(
                "ref.unresolved", loc,
                f"practice {prac['id']!r} placed at unknown level rank {prac['level']}",
            ))
        else:
            practiced_ranks.add(prac["level"])
        if prac["principle"] not in principle_ids:
            violations.append(Violation(
                "ref.unresolved", loc,
                f"practice {prac['id']!r} references unknown principle {prac['principle']!r}",
            ))
        project_scoped = False
        for cid in prac["characteristics"]:
            char = characteristic_by_id.get(cid)
            if char is None:
                violations.append(Violation(
                    "ref.unresolved", loc,
                    f"practice {prac['id']!r} references unknown characteristic {cid!r}",
                ))
            elif char["scope"] == Scope.PROJECT.value:
                project_scoped = True
        if prac["limiting"] and not project_scoped:
            violations.append(Violation(
                "limiting.scope", loc,
                f"practice {prac['id']!r} is flagged limiting but has no project-scope characteristic",
            ))
        if not prac["limiting"] and project_scoped:
            violations.append(Violation(
                "limiting.scope", loc,
                f"practice {prac['id']!r} has a project-scope characteristic but is not flagged limiting",
            ))

    for rank in sorted(rank_set):
        if rank not in practiced_ranks:
            violations.append(Violation(
                "level.empty", f"levels/{rank}",
                f"level {rank} contains no practices; the index is based on practices",
            ))

    for factor in doc["factors"]:
        for cid in factor["characteristics"]:
            if cid not in characteristic_by_id:
                violations.append(Violation(
                    "ref.unresolved", f"factors/{factor['id']}",
                    f"factor {factor['id']!r} references unknown characteristic {cid!r}",
                ))

    return violations


def _build(doc: Mapping[str, Any]) -> MeasurementIndex:
    levels = tuple(
        AgileLevel(rank=lv["rank"], name=lv["name"], objective=lv["objective"])
        for lv in sorted(doc["levels"], key=lambda lv: lv["rank"])
    )
    levels_by_rank = {lv.rank: lv for lv in levels}
    principles = tuple(AgilePrinciple(id=p["id"], name=p["name"]) for p in doc["principles"])
    principles_by_id = {p.id: p for p in principles}
    characteristics = tuple(
        Characteristic(
            id=c["id"],
            description=c["description"],
            scope=Scope(c["scope"]),
            controllable=c["controllable"],
            origin=c.get("origin"),
        )
        for c in doc["characteristics"]
    )
    chars_by_id = {c.id: c for c in characteristics}
    indicators = tuple(
        Indicator(
            id=i["id"],
            question=i["question"],
            characteristic=chars_by_id[i["characteristic"]],
            respondent_role=Role(i["respondent_role"]),
            answer_kind=AnswerKind(i["answer_kind"]),
            weight=float(i.get("weight", 1)),
            origin=i.get("origin"),
        )
        for i in doc["indicators"]
    )
    practices = tuple(
        Practice(
            id=p["id"],
            name=p["name"],
            level=levels_by_rank[p["level"]],
            principle=principles_by_id[p["principle"]],
            limiting=p["limiting"],
            characteristics=tuple(chars_by_id[cid] for cid in p["characteristics"]),
        )
        for p in doc["practices"]
    )
    factors = tuple(
        DiscontinuingFactor(
            id=f["id"],
            name=f["name"],
            characteristics=tuple(chars_by_id[cid] for cid in f["characteristics"]),
        )
        for f in doc["factors"]
    )
    return MeasurementIndex(
        name=doc["meta"]["name"],
        version=doc["meta"]["version"],
        levels=levels,
        principles=principles,
        characteristics=characteristics,
        indicators=indicators,
        practices=practices,
        factors=factors,
    )


def load_index(source: str | bytes | Mapping[str, Any]) -> MeasurementIndex:
    """Parse and fully validate an index document (JSON text or parsed dict)."""
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"index document is not valid JSON: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, Mapping):
        raise ParseError("index document root must be a JSON object")
    report = validate_index(doc)
    if report:
        raise IndexValidationError(
            f"index document violates {len(report)} invariant(s)",
            details=[v.to_dict() for v in report],
        )
    return _build(doc)


def serialize_index(index: MeasurementIndex) -> dict[str, Any]:
    """The index in file-format form; load_index(serialize_index(i)) == i."""

    def weight_value(w: float) -> int | float:
        return int(w) if w.is_integer() else w

    doc: dict[str, Any] = {
        "meta": {"name": index.name, "version": index.version},
        "levels": [
            {"rank": lv.rank, "name": lv.name, "objective": lv.objective} for lv in index.levels
        ],
        "principles": [{"id": p.id, "name": p.name} for p in index.principles],
        "characteristics": [],
        "indicators": [],
        "practices": [
            {
                "id": p.id,
                "name": p.name,
                "level": p.level.rank,
                "principle": p.principle.id,
                "limiting": p.limiting,
                "characteristics": [c.id for c in p.characteristics],
            }
            for p in index.practices
        ],
        "factors": [
            {"id": f.id, "name": f.name, "characteristics": [c.id for c in f.characteristics]}
            for f in index.factors
        ],
    }
    for c in index.characteristics:
        entry: dict[str, Any] = {
            "id": c.id,
            "description": c.description,
            "scope": c.scope.value,
            "controllable": c.controllable,
        }
        if c.origin is not None:
            entry["origin"] = c.origin
        doc["characteristics"].append(entry)
    for i in index.indicators:
        ind_entry: dict[str, Any] = {
            "id": i.id,
            "question": i.question,
            "characteristic": i.characteristic.id,
            "respondent_role": i.respondent_role.value,
            "answer_kind": i.answer_kind.value,
            "weight": weight_value(i.weight),
        }
        if i.origin is not None:
            ind_entry["origin"] = i.origin
        doc["indicators"].append(ind_entry)
    return doc


_DEFAULT: MeasurementIndex | None = None


def default_index() -> MeasurementIndex:
    """The built-in five-level index; validated on first use, then cached."""
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_index(catalog.document())
    return _DEFAULT


def default_index_document() -> dict[str, Any]:
    """The built-in index as a fresh file-format document."""
    return catalog.document()
