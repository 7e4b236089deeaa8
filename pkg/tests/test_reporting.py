"""Reports: matrix, grid, gate summary, adoption, plan; exports per format."""

from __future__ import annotations

import csv
import io
import json

import pytest

from agility import default_index, practices_at_or_below
from agility.errors import ReportFormatError, StageOrderError
from agility.persistence import new_session
from agility.pipeline import LevelPolicy
from agility.reporting import (
    EmptyReportError,
    ExportFormat,
    ReportKind,
    build_report,
    export,
    gate_summary,
    level_grid,
    readiness_matrix,
)

from fixtures import answer_all, gate_blocked_session, worked_example_session, all_clear_session


@pytest.fixture(scope="module")
def finished_session():
    session = worked_example_session()
    session.run_stage1()
    session.run_stage2()
    session.run_stage3()
    session.run_stage4("improve")
    return session


class TestReadinessMatrix:
    def test_power_distance_marked_fully_achieved(self, finished_session):
        doc = build_report(finished_session, ReportKind.READINESS_MATRIX)
        planning = next(
            g for g in doc.body["groups"] if g["practice_id"] == "collaborative-planning"
        )
        row = next(
            r for r in planning["rows"]
            if r["characteristic"] == "Small power-distance in the organization"
        )
        assert row["band"] == "FA"
        markdown = export(doc, "markdown").decode()
        matrix_line = next(
            line for line in markdown.splitlines()
            if "Small power-distance in the organization" in line
        )
        cells = [cell.strip() for cell in matrix_line.split("|")]
        assert cells[-2] == "X"  # FA column
        assert cells[-4] == cells[-3] == cells[-5] == ""

    def test_group_count_matches_scope(self, finished_session):
        doc = build_report(finished_session, ReportKind.READINESS_MATRIX)
        expected = len(practices_at_or_below(finished_session.index, 3))
        assert len(doc.body["groups"]) == expected

    def test_each_deficient_characteristic_has_one_low_row(self, finished_session):
        doc = build_report(finished_session, ReportKind.READINESS_MATRIX)
        for deficiency in finished_session.results[3].deficiencies:
            cid = deficiency.score.characteristic.id
            rows = [
                r for g in doc.body["groups"] for r in g["rows"]
                if r["characteristic_id"] == cid
            ]
            assert len(rows) == 1
            assert rows[0]["band"] in ("NA", "PA")

    def test_legend_rendered_verbatim(self, finished_session):
        markdown = export(
            build_report(finished_session, ReportKind.READINESS_MATRIX), "markdown"
        ).decode()
        assert "NA: Not Achieved (0%-35%)" in markdown
        assert "PA: Partially Achieved (35%-65%)" in markdown
        assert "LA: Largely Achieved (65%-85%)" in markdown
        assert "FA: Fully Achieved (85%-100%)" in markdown

    def test_all_achieved_matrix_has_no_deficiency_section(self):
        session = all_clear_session()
        session.run_stage1()
        session.run_stage2()
        session.run_stage3()
        doc = build_report(session, ReportKind.READINESS_MATRIX)
        assert doc.body["deficiencies"] == []
        assert all(
            row["band"] == "FA" for g in doc.body["groups"] for row in g["rows"]
        )
        assert "Deficient characteristics" not in export(doc, "markdown").decode()

    def test_practice_without_organizational_rows_rendered_explicitly(self, finished_session):
        doc = build_report(finished_session, ReportKind.READINESS_MATRIX)
        face_to_face = next(
            g for g in doc.body["groups"]
            if g["practice_id"] == "frequent-face-to-face-communication"
        )
        assert face_to_face["rows"] == []
        markdown = export(doc, "markdown").decode()
        assert "| Frequent face-to-face communication | — |" in markdown

    def test_empty_matrix_fails_at_construction(self):
        session = new_session(default_index(), policy=LevelPolicy.BELOW_FAILURE)
        answer_all(session, {"customer-commitment": "NA"})
        session.run_stage1()
        session.run_stage2()
        stage3 = session.run_stage3()
        with pytest.raises(EmptyReportError):
            readiness_matrix(stage3)


class TestLevelGrid:
    def test_annotations_for_worked_example(self, finished_session):
        doc = build_report(finished_session, ReportKind.LEVEL_GRID)
        assert doc.body["target_level"] == 3
        assert doc.body["readiness_level"] == 1
        by_practice = {
            p["practice_id"]: p["status"]
            for level in doc.body["levels"]
            for cell in level["cells"]
            for p in cell["practices"]
        }
        assert by_practice["frequent-face-to-face-communication"] == "limiting_failed"
        assert by_practice["collaborative-planning"] == "not_ready"
        assert by_practice["coding-standards"] == "ready"
        assert by_practice["user-stories"] == "not_assessed"
        assert by_practice["low-process-ceremony"] == "not_assessed"
        target = next(lv for lv in doc.body["levels"] if lv["is_target"])
        assert target["rank"] == 3
        readiness = next(lv for lv in doc.body["levels"] if lv["is_readiness"])
        assert readiness["rank"] == 1

    def test_all_ready_top_target(self):
        session = all_clear_session()
        session.run_stage1()
        session.run_stage2()
        session.run_stage3()
        doc = level_grid(session.index, session.results[3], session.results[2])
        statuses = {
            p["status"]
            for level in doc.body["levels"]
            for cell in level["cells"]
            for p in cell["practices"]
        }
        assert statuses == {"ready"}

    def test_grid_covers_all_forty(self, finished_session):
        doc = build_report(finished_session, ReportKind.LEVEL_GRID)
        count = sum(
            len(cell["practices"]) for level in doc.body["levels"] for cell in level["cells"]
        )
        assert count == 40


class TestGateSummary:
    def test_no_go_lists_blockers(self):
        session = gate_blocked_session()
        session.run_stage1()
        doc = build_report(session, ReportKind.GATE_SUMMARY)
        assert doc.body["decision"] == "no_go"
        assert doc.body["blocking_factors"] == ["absence-of-executive-support"]
        markdown = export(doc, "markdown").decode()
        assert "NO-GO" in markdown

    def test_go_summary(self, finished_session):
        doc = build_report(finished_session, ReportKind.GATE_SUMMARY)
        assert doc.body["decision"] == "go"
        assert doc.body["blocking_factors"] == []


class TestAdoptionAndPlan:
    def test_adoption_report_content(self, finished_session):
        doc = build_report(finished_session, ReportKind.ADOPTION_REPORT)
        assert doc.body["scenario"] == "R_lt_T"
        assert doc.body["final_level"] == 3
        markdown = export(doc, "markdown").decode()
        assert "Practices to adopt" in markdown
        assert "contingent" in markdown

    def test_improvement_plan_lists_controllable_items(self, finished_session):
        doc = build_report(finished_session, ReportKind.IMPROVEMENT_PLAN)
        ids = {item["characteristic_id"] for item in doc.body["items"]}
        assert ids == {"collaborative-management-style", "management-buy-in"}
        markdown = export(doc, "markdown").decode()
        assert "Management buy-in" in markdown


class TestExport:
    def test_json_round_trips(self, finished_session):
        doc = build_report(finished_session, ReportKind.READINESS_MATRIX)
        parsed = json.loads(export(doc, "json"))
        assert parsed == doc.to_dict()
        assert parsed["body"] == doc.body

    def test_csv_columns_and_rows(self, finished_session):
        doc = build_report(finished_session, ReportKind.READINESS_MATRIX)
        rows = list(csv.reader(io.StringIO(export(doc, "csv").decode())))
        assert rows[0] == ["level", "principle", "practice", "characteristic", "percentage", "band"]
        power = next(r for r in rows if r[3] == "Small power-distance in the organization")
        assert power[0] == "1"
        assert power[5] == "FA"
        assert power[4] == "100.00"

    def test_csv_unsupported_for_other_kinds(self, finished_session):
        doc = build_report(finished_session, ReportKind.GATE_SUMMARY)
        with pytest.raises(ReportFormatError):
            export(doc, ExportFormat.CSV)

    def test_exports_are_deterministic(self, finished_session):
        doc1 = build_report(finished_session, ReportKind.READINESS_MATRIX)
        doc2 = build_report(finished_session, ReportKind.READINESS_MATRIX)
        for fmt in ("json", "markdown", "csv"):
            assert export(doc1, fmt) == export(doc2, fmt)

    def test_report_requires_results(self):
        session = worked_example_session()
        with pytest.raises(StageOrderError):
            build_report(session, ReportKind.GATE_SUMMARY)
        session.run_stage1()
        with pytest.raises(StageOrderError):
            build_report(session, ReportKind.READINESS_MATRIX)

    def test_generated_at_comes_from_the_audit_log(self, finished_session):
        doc = build_report(finished_session, ReportKind.READINESS_MATRIX)
        assert doc.generated_at == finished_session.stage_completed_at(3)
        assert doc.session_ref == finished_session.id
