"""Coach-facing report documents rendered from stored stage results.

Every report is a neutral content tree derived purely from results that are
already computed (no fresh scoring happens here), so the CLI, the HTTP
service and the console all render the same thing. Exports are
deterministic: same results, same bytes.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from typing import Any

from .canonical import pretty_json
from .errors import EngineError, ReportFormatError, StageOrderError
from .index_model import MeasurementIndex
from .pipeline import (
    AssessmentSession,
    Stage1Result,
    Stage2Result,
    Stage3Result,
    Stage4Result,
)
from .scoring import AchievementBand


class ReportKind(str, enum.Enum):
    GATE_SUMMARY = "gate_summary"
    READINESS_MATRIX = "readiness_matrix"
    LEVEL_GRID = "level_grid"
    ADOPTION_REPORT = "adoption_report"
    IMPROVEMENT_PLAN = "improvement_plan"


class ExportFormat(str, enum.Enum):
    MARKDOWN = "markdown"
    JSON = "json"
    CSV = "csv"


BAND_LEGEND: dict[AchievementBand, str] = {
    AchievementBand.NA: "NA: Not Achieved (0%-35%)",
    AchievementBand.PA: "PA: Partially Achieved (35%-65%)",
    AchievementBand.LA: "LA: Largely Achieved (65%-85%)",
    AchievementBand.FA: "FA: Fully Achieved (85%-100%)",
}

BAND_ORDER = (AchievementBand.NA, AchievementBand.PA, AchievementBand.LA, AchievementBand.FA)


class EmptyReportError(EngineError):
    """Report construction refused because there is nothing to show."""

    code = "report.empty"


@dataclass(frozen=True)
class ReportDocument:
    kind: ReportKind
    body: dict[str, Any]
    generated_at: str | None = None
    session_ref: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "generated_at": self.generated_at,
            "session": self.session_ref,
            "body": self.body,
        }


def _pct(value: float) -> float:
    return round(value, 2)


# --- builders ----------------------------------------------------------------


def gate_summary(
    stage1: Stage1Result,
    *,
    session_ref: str | None = None,
    generated_at: str | None = None,
) -> ReportDocument:
    body = {
        "decision": stage1.decision.value,
        "blocking_factors": list(stage1.blocking_factors),
        "factors": [
            {
                "factor_id": r.factor.id,
                "name": r.factor.name,
                "present": r.present,
                "score": _pct(r.score),
                "characteristics": [
                    {
                        "characteristic_id": s.characteristic.id,
                        "description": s.characteristic.description,
                        "percentage": _pct(s.percentage),
                        "band": s.band.name,
                    }
                    for s in r.scores
                ],
            }
            for r in stage1.factors
        ],
    }
    return ReportDocument(ReportKind.GATE_SUMMARY, body, generated_at, session_ref)


def readiness_matrix(
    stage3: Stage3Result,
    *,
    session_ref: str | None = None,
    generated_at: str | None = None,
) -> ReportDocument:
    """Table of (practice, characteristic) rows with the achieved band marked."""
    if not stage3.matrix:
        raise EmptyReportError("readiness matrix is empty; no practices were assessed")
    groups = []
    for entry in stage3.matrix:
        p = entry.practice
        groups.append({
            "level": p.level.rank,
            "level_name": p.level.name,
            "principle": p.principle.name,
            "practice_id": p.id,
            "practice": p.name,
            "ready": entry.ready,
            "rows": [
                {
                    "characteristic_id": s.characteristic.id,
                    "characteristic": s.characteristic.description,
                    "percentage": _pct(s.percentage),
                    "band": s.band.name,
                }
                for s in entry.scores
            ],
        })
    deficiencies = [
        {
            "characteristic_id": d.score.characteristic.id,
            "description": d.score.characteristic.description,
            "band": d.score.band.name,
            "controllable": d.controllable,
            "practices": [p.id for p in d.practices],
        }
        for d in stage3.deficiencies
    ]
    body = {
        "target_level": stage3.target_level,
        "readiness_level": stage3.readiness_level,
        "extended": stage3.extended,
        "legend": [BAND_LEGEND[b] for b in BAND_ORDER],
        "groups": groups,
        "deficiencies": deficiencies,
    }
    return ReportDocument(ReportKind.READINESS_MATRIX, body, generated_at, session_ref)


def level_grid(
    index: MeasurementIndex,
    stage3: Stage3Result,
    stage2: Stage2Result,
    *,
    session_ref: str | None = None,
    generated_at: str | None = None,
) -> ReportDocument:
    """The level x principle grid annotated with each practice's standing."""
    stage2_failures = set(stage2.failed_practice_ids())
    ready_by_id = {entry.practice.id: entry.ready for entry in stage3.matrix}

    def status(practice_id: str) -> str:
        if practice_id in stage2_failures:
            return "limiting_failed"
        if practice_id in ready_by_id:
            return "ready" if ready_by_id[practice_id] else "not_ready"
        return "not_assessed"

    levels = []
    for level in sorted(index.levels, key=lambda lv: -lv.rank):
        cells = []
        for principle in index.principles:
            members = sorted(
                (
                    p for p in index.practices
                    if p.level.rank == level.rank and p.principle.id == principle.id
                ),
                key=lambda p: p.id,
            )
            cells.append({
                "principle_id": principle.id,
                "principle": principle.name,
                "practices": [
                    {"practice_id": p.id, "name": p.name, "limiting": p.limiting,
                     "status": status(p.id)}
                    for p in members
                ],
            })
        levels.append({
            "rank": level.rank,
            "name": level.name,
            "objective": level.objective,
            "is_target": level.rank == stage3.target_level,
            "is_readiness": level.rank == stage3.readiness_level,
            "cells": cells,
        })
    body = {
        "target_level": stage3.target_level,
        "readiness_level": stage3.readiness_level,
        "levels": levels,
    }
    return ReportDocument(ReportKind.LEVEL_GRID, body, generated_at, session_ref)


def adoption_report(
    stage4: Stage4Result,
    *,
    session_ref: str | None = None,
    generated_at: str | None = None,
) -> ReportDocument:
    body = stage4.to_dict()
    return ReportDocument(ReportKind.ADOPTION_REPORT, body, generated_at, session_ref)


def improvement_plan(
    stage4: Stage4Result,
    *,
    session_ref: str | None = None,
    generated_at: str | None = None,
) -> ReportDocument:
    body = {
        "scenario": stage4.scenario.value,
        "option": stage4.option.value,
        "target_level": stage4.target_level,
        "readiness_level": stage4.readiness_level,
        "final_level": stage4.final_level,
        "lowered_from": stage4.lowered_from,
        "contingent": stage4.contingent,
        "items": [d.to_dict() for d in stage4.improvement_plan],
    }
    return ReportDocument(ReportKind.IMPROVEMENT_PLAN, body, generated_at, session_ref)


def build_report(session: AssessmentSession, kind: ReportKind | str) -> ReportDocument:
    """Build any report kind from a session's stored results."""
    kind = ReportKind(kind)
    needs = {
        ReportKind.GATE_SUMMARY: 1,
        ReportKind.READINESS_MATRIX: 3,
        ReportKind.LEVEL_GRID: 3,
        ReportKind.ADOPTION_REPORT: 4,
        ReportKind.IMPROVEMENT_PLAN: 4,
    }[kind]
    for stage in range(1, needs + 1):
        if stage not in session.results:
            raise StageOrderError(
                f"report {kind.value!r} needs stage {needs} results; stage {stage} has not run",
                details={"stage": stage, "kind": kind.value},
            )
    at = session.stage_completed_at(needs)
    ref = session.id
    if kind is ReportKind.GATE_SUMMARY:
        return gate_summary(session.results[1], session_ref=ref, generated_at=at)
    if kind is ReportKind.READINESS_MATRIX:
        return readiness_matrix(session.results[3], session_ref=ref, generated_at=at)
    if kind is ReportKind.LEVEL_GRID:
        return level_grid(
            session.index, session.results[3], session.results[2],
            session_ref=ref, generated_at=at,
        )
    if kind is ReportKind.ADOPTION_REPORT:
        return adoption_report(session.results[4], session_ref=ref, generated_at=at)
    return improvement_plan(session.results[4], session_ref=ref, generated_at=at)


# --- export ------------------------------------------------------------------


def export(doc: ReportDocument, format: ExportFormat | str) -> bytes:
    """Render a report document to bytes; csv only applies to the matrix."""
    format = ExportFormat(format)
    if format is ExportFormat.JSON:
        return pretty_json(doc.to_dict()).encode("utf-8")
    if format is ExportFormat.CSV:
        if doc.kind is not ReportKind.READINESS_MATRIX:
            raise ReportFormatError(
                f"csv export is only defined for the readiness matrix, not {doc.kind.value!r}"
            )
        return _matrix_csv(doc)
    renderer = {
        ReportKind.GATE_SUMMARY: _gate_markdown,
        ReportKind.READINESS_MATRIX: _matrix_markdown,
        ReportKind.LEVEL_GRID: _grid_markdown,
        ReportKind.ADOPTION_REPORT: _adoption_markdown,
        ReportKind.IMPROVEMENT_PLAN: _plan_markdown,
    }[doc.kind]
    return renderer(doc).encode("utf-8")


def _matrix_csv(doc: ReportDocument) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["level", "principle", "practice", "characteristic", "percentage", "band"])
    for group in doc.body["groups"]:
        if not group["rows"]:
            writer.writerow([group["level"], group["principle"], group["practice"], "", "", ""])
            continue
        for row in group["rows"]:
            writer.writerow([
                group["level"],
                group["principle"],
                group["practice"],
                row["characteristic"],
                f"{row['percentage']:.2f}",
                row["band"],
            ])
    return out.getvalue().encode("utf-8")


def _header(title: str, doc: ReportDocument) -> list[str]:
    lines = [f"# {title}", ""]
    if doc.session_ref:
        stamp = f" at {doc.generated_at}" if doc.generated_at else ""
        lines += [f"Session `{doc.session_ref}`{stamp}", ""]
    return lines


def _gate_markdown(doc: ReportDocument) -> str:
    body = doc.body
    decision = "GO" if body["decision"] == "go" else "NO-GO"
    lines = _header("Go / No-Go Summary", doc)
    lines += [f"**Decision: {decision}**", ""]
    if body["blocking_factors"]:
        lines += ["Blocking factors:", ""]
        lines += [f"- {fid}" for fid in body["blocking_factors"]]
        lines.append("")
    lines += [
        "| Factor | Present | Score | Characteristic | Band |",
        "| --- | --- | --- | --- | --- |",
    ]
    for factor in body["factors"]:
        first = True
        for char in factor["characteristics"]:
            name = factor["name"] if first else ""
            present = ("yes" if factor["present"] else "no") if first else ""
            score = f"{factor['score']:.2f}" if first else ""
            lines.append(
                f"| {name} | {present} | {score} | {char['description']} | {char['band']} |"
            )
            first = False
    lines.append("")
    return "\n".join(lines)


def _matrix_markdown(doc: ReportDocument) -> str:
    body = doc.body
    lines = _header("Organizational Readiness Matrix", doc)
    lines += [
        f"Target level (T): {body['target_level']} — Readiness level (R): {body['readiness_level']}",
        "",
        "| Level | Principle | Practice | Characteristic | NA | PA | LA | FA |",
        "| --- | --- | --- | --- | --- | --- | --- | --- |",
    ]
    for group in body["groups"]:
        label_cells = f"{group['level']} | {group['principle']} | {group['practice']}"
        if not group["rows"]:
            lines.append(f"| {label_cells} | — |  |  |  |  |")
            continue
        first = True
        for row in group["rows"]:
            prefix = label_cells if first else " |  | "
            marks = ["X" if row["band"] == band.name else "" for band in BAND_ORDER]
            lines.append(
                f"| {prefix} | {row['characteristic']} | "
                f"{marks[0]} | {marks[1]} | {marks[2]} | {marks[3]} |"
            )
            first = False
    lines.append("")
    for legend in body["legend"]:
        lines.append(f"{legend}  ")
    lines.append("")
    if body["deficiencies"]:
        lines += ["## Deficient characteristics", ""]
        for d in body["deficiencies"]:
            control = "controllable" if d["controllable"] else "outside organizational control"
            owners = ", ".join(d["practices"])
            lines.append(f"- {d['description']} — {d['band']} ({control}; needed by {owners})")
        lines.append("")
    return "\n".join(lines)


_STATUS_LABELS = {
    "ready": "ready",
    "not_ready": "not ready",
    "limiting_failed": "limiting practice failed",
    "not_assessed": "not assessed",
}


def _grid_markdown(doc: ReportDocument) -> str:
    body = doc.body
    lines = _header("Agility Level Grid", doc)
    lines += [
        f"Target level (T): {body['target_level']} — Readiness level (R): {body['readiness_level']}",
        "",
    ]
    for level in body["levels"]:
        markers = []
        if level["is_target"]:
            markers.append("T")
        if level["is_readiness"]:
            markers.append("R")
        suffix = f"  ⟵ {', '.join(markers)}" if markers else ""
        lines.append(f"## Level {level['rank']}: {level['name']}{suffix}")
        lines += [f"*{level['objective']}*", ""]
        for cell in level["cells"]:
            if not cell["practices"]:
                continue
            lines.append(f"- **{cell['principle']}**")
            for practice in cell["practices"]:
                flag = " (limiting)" if practice["limiting"] else ""
                lines.append(
                    f"  - {practice['name']}{flag} — {_STATUS_LABELS[practice['status']]}"
                )
        lines.append("")
    return "\n".join(lines)


def _adoption_markdown(doc: ReportDocument) -> str:
    body = doc.body
    lines = _header("Adoption Report", doc)
    lines += [
        f"Scenario: {body['scenario']} (T={body['target_level']}, R={body['readiness_level']})",
        f"Option: {body['option']} — Final level: {body['final_level']}"
        + (" (contingent on the improvement plan)" if body["contingent"] else ""),
        "",
    ]
    if body["lowered_from"] is not None:
        lines += [
            f"Target lowered from level {body['lowered_from']}: "
            "non-controllable deficiencies block the higher levels.",
            "",
        ]
    if body["adoption"]:
        lines += ["## Practices to adopt", ""]
        current_level = None
        for practice in body["adoption"]:
            if practice["level"] != current_level:
                current_level = practice["level"]
                lines.append(f"### Level {current_level}")
            lines.append(f"- {practice['name']}")
        lines.append("")
    else:
        lines += ["No practices can be adopted at the final level.", ""]
    if body["excluded_stage2_failures"]:
        lines += ["Excluded (failed project-level assessment):", ""]
        lines += [f"- {pid}" for pid in body["excluded_stage2_failures"]]
        lines.append("")
    if body["excluded_not_ready"]:
        lines += ["Excluded (organization not ready):", ""]
        lines += [f"- {pid}" for pid in body["excluded_not_ready"]]
        lines.append("")
    return "\n".join(lines)


def _plan_markdown(doc: ReportDocument) -> str:
    body = doc.body
    lines = _header("Improvement Plan", doc)
    lines += [
        f"Scenario: {body['scenario']} (T={body['target_level']}, R={body['readiness_level']}) "
        f"— final level {body['final_level']}",
        "",
    ]
    if not body["items"]:
        lines += ["Nothing to improve: no controllable deficiencies were found.", ""]
        return "\n".join(lines)
    lines += [
        "| Characteristic | Band | Level | Needed by | Controllable |",
        "| --- | --- | --- | --- | --- |",
    ]
    for item in body["items"]:
        owners = ", ".join(item["practices"])
        controllable = "yes" if item["controllable"] else "no"
        lines.append(
            f"| {item['description']} | {item['band']} | {item['lowest_level']} "
            f"| {owners} | {controllable} |"
        )
    lines.append("")
    if body["lowered_from"] is not None:
        lines += [
            f"Non-controllable deficiencies lowered the attainable level "
            f"from {body['lowered_from']} to {body['final_level']}.",
            "",
        ]
    return "\n".join(lines)
