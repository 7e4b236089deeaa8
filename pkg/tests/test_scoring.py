"""Scoring: normalization, bands, aggregation, readiness, factor presence."""

from __future__ import annotations

import copy
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agility import band_of, default_index, load_index, normalize_answer
from agility.errors import AnswerRoleError, AnswerValueError, OutOfRangeError, UnknownEntityError
from agility.index_model import AnswerKind, Scope
from agility.scoring import (
    AchievementBand,
    Answer,
    ResponseSet,
    Role,
    factor_presence,
    practice_readiness,
    score_characteristic,
)

from fixtures import TINY_INDEX_DOC, tiny_index

# Independent interval oracle for the band mapping (half-open, shared
# endpoint belongs to the higher band).
BAND_INTERVALS = [
    (0, 35, AchievementBand.NA),
    (35, 65, AchievementBand.PA),
    (65, 85, AchievementBand.LA),
    (85, 101, AchievementBand.FA),
]


def oracle_band(p: float) -> AchievementBand:
    if p == 100:
        return AchievementBand.FA
    for low, high, band in BAND_INTERVALS:
        if low <= p < high:
            return band
    raise AssertionError(p)


class TestNormalizeAnswer:
    def test_likert_endpoints_and_interior(self):
        a = Answer("x", "r", Role.DEVELOPER, 1)
        assert normalize_answer(a, kind=AnswerKind.LIKERT5) == 0
        assert normalize_answer(Answer("x", "r", Role.DEVELOPER, 4), kind=AnswerKind.LIKERT5) == 0.75
        assert normalize_answer(Answer("x", "r", Role.DEVELOPER, 5), kind=AnswerKind.LIKERT5) == 1

    def test_binary(self):
        assert normalize_answer(Answer("x", "r", Role.MANAGER, True), kind=AnswerKind.BINARY) == 1
        assert normalize_answer(Answer("x", "r", Role.MANAGER, False), kind=AnswerKind.BINARY) == 0

    def test_percent(self):
        assert normalize_answer(Answer("x", "r", Role.ASSESSOR, 50), kind=AnswerKind.PERCENT) == 0.5

    def test_out_of_range_rejected(self):
        with pytest.raises(AnswerValueError):
            normalize_answer(Answer("x", "r", Role.DEVELOPER, 7), kind=AnswerKind.LIKERT5)
        with pytest.raises(AnswerValueError):
            normalize_answer(Answer("x", "r", Role.DEVELOPER, 101), kind=AnswerKind.PERCENT)

    def test_kind_from_index(self):
        index = tiny_index()
        answer = Answer("review-habit-1", "dev", Role.DEVELOPER, 3)
        assert normalize_answer(answer, index=index) == 0.5


class TestBandOf:
    @pytest.mark.parametrize(
        "percentage,expected",
        [
            (0, AchievementBand.NA),
            (34.99, AchievementBand.NA),
            (35, AchievementBand.PA),
            (50, AchievementBand.PA),
            (64.99, AchievementBand.PA),
            (65, AchievementBand.LA),
            (84.99, AchievementBand.LA),
            (85, AchievementBand.FA),
            (100, AchievementBand.FA),
        ],
    )
    def test_boundaries(self, percentage, expected):
        assert band_of(percentage) is expected

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            band_of(-0.1)
        with pytest.raises(OutOfRangeError):
            band_of(100.1)

    @given(st.floats(min_value=0, max_value=100), st.floats(min_value=0, max_value=100))
    def test_monotone(self, p, q):
        if p > q:
            p, q = q, p
        assert band_of(p) <= band_of(q)

    def test_total_order(self):
        assert (
            AchievementBand.NA < AchievementBand.PA < AchievementBand.LA < AchievementBand.FA
        )


def _scoring_index(indicator_specs):
    """One characteristic with the given (kind, weight) indicators."""
    doc = {
        "meta": {"name": "scoring", "version": "0"},
        "levels": [
            {"rank": 1, "name": "One", "objective": ""},
            {"rank": 2, "name": "Two", "objective": ""},
        ],
        "principles": [{"id": "p", "name": "P"}],
        "characteristics": [
            {"id": "c", "description": "C", "scope": "organizational", "controllable": True},
            {"id": "c2", "description": "C2", "scope": "organizational", "controllable": True},
        ],
        "indicators": [
            {"id": f"i{n}", "question": f"Q{n}?", "characteristic": "c",
             "respondent_role": "developer", "answer_kind": kind, "weight": weight}
            for n, (kind, weight) in enumerate(indicator_specs)
        ] + [
            {"id": "other", "question": "Other?", "characteristic": "c2",
             "respondent_role": "developer", "answer_kind": "likert5"}
        ],
        "practices": [
            {"id": "a", "name": "A", "level": 1, "principle": "p", "limiting": False,
             "characteristics": ["c"]},
            {"id": "b", "name": "B", "level": 2, "principle": "p", "limiting": False,
             "characteristics": ["c2"]},
        ],
        "factors": [
            {"id": "f", "name": "F", "characteristics": ["c2"]},
        ],
    }
    return load_index(doc)


class TestScoreCharacteristic:
    def test_equal_weights(self):
        # two equal-weight indicators at 0.75 and 1.0 -> (0.75 + 1.0) / 2 = 87.5
        index = _scoring_index([("likert5", 1), ("likert5", 1)])
        rs = ResponseSet(index)
        rs.record("i0", "dev", 4)
        rs.record("i1", "dev", 5)
        score = score_characteristic("c", index, rs)
        assert score.percentage == 87.5
        assert score.band is AchievementBand.FA
        assert not score.provisional

    def test_maximum(self):
        index = _scoring_index([("likert5", 1), ("likert5", 1), ("likert5", 1)])
        rs = ResponseSet(index)
        for n in range(3):
            rs.record(f"i{n}", "dev", 5)
        score = score_characteristic("c", index, rs)
        assert score.percentage == 100
        assert score.band is AchievementBand.FA

    def test_weighted_mean_hand_computed(self):
        # weights 2 and 1, scores 0.5 and 1.0 -> (2*0.5 + 1*1.0)/3 = 66.67%
        index = _scoring_index([("likert5", 2), ("percent", 1)])
        rs = ResponseSet(index)
        rs.record("i0", "dev", 3)    # 0.5
        rs.record("i1", "dev", 100)  # 1.0
        score = score_characteristic("c", index, rs)
        assert score.percentage == pytest.approx(66.67, abs=0.01)
        assert score.band is AchievementBand.LA

    def test_multiple_respondents_averaged_per_indicator(self):
        index = _scoring_index([("likert5", 1)])
        rs = ResponseSet(index)
        rs.record("i0", "one", 1)
        rs.record("i0", "two", 5)
        score = score_characteristic("c", index, rs)
        assert score.percentage == 50
        assert score.band is AchievementBand.PA

    def test_unanswered_indicator_marks_provisional(self):
        index = _scoring_index([("likert5", 1), ("likert5", 1)])
        rs = ResponseSet(index)
        rs.record("i0", "dev", 5)
        score = score_characteristic("c", index, rs)
        assert score.provisional
        assert score.answered == 1
        assert score.expected == 2
        assert score.percentage == 100  # only the answered indicator counts

    def test_no_answers_defaults_to_zero_na_provisional(self):
        index = _scoring_index([("likert5", 1)])
        score = score_characteristic("c", index, ResponseSet(index))
        assert (score.percentage, score.band, score.provisional) == (
            0,
            AchievementBand.NA,
            True,
        )

    def test_unknown_characteristic(self):
        index = _scoring_index([("likert5", 1)])
        with pytest.raises(UnknownEntityError):
            score_characteristic("nope", index, ResponseSet(index))

    @given(
        st.lists(
            st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=3),
            min_size=1,
            max_size=5,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_uniform_weights_equal_unweighted_mean(self, per_indicator_values):
        # brute-force oracle: plain mean over per-indicator means
        index = _scoring_index([("likert5", 1)] * len(per_indicator_values))
        rs = ResponseSet(index)
        for n, values in enumerate(per_indicator_values):
            for r, value in enumerate(values):
                rs.record(f"i{n}", f"resp-{r}", value)
        expected = 100 * sum(
            sum((v - 1) / 4 for v in values) / len(values) for values in per_indicator_values
        ) / len(per_indicator_values)
        actual = score_characteristic("c", index, rs).percentage
        assert actual == pytest.approx(expected, abs=1e-9)


class TestResponseSet:
    def test_replacement_keeps_single_answer(self):
        index = tiny_index()
        rs = ResponseSet(index)
        assert rs.record("review-habit-1", "dev", 3) == "added"
        assert rs.record("review-habit-1", "dev", 5) == "replaced"
        assert len(rs) == 1
        assert rs.answers_for("review-habit-1")[0].value == 5

    def test_identical_rerecord_is_noop(self):
        index = tiny_index()
        rs = ResponseSet(index)
        rs.record("review-habit-1", "dev", 3, recorded_at="2026-01-01T00:00:00+00:00")
        assert rs.record("review-habit-1", "dev", 3, recorded_at="2026-02-02T00:00:00+00:00") == "unchanged"
        assert rs.answers_for("review-habit-1")[0].recorded_at == "2026-01-01T00:00:00+00:00"

    def test_role_mismatch_rejected(self):
        index = tiny_index()
        rs = ResponseSet(index)
        with pytest.raises(AnswerRoleError):
            rs.record("review-habit-1", "mgr", 3, role="manager")

    def test_unknown_indicator_rejected(self):
        rs = ResponseSet(tiny_index())
        with pytest.raises(UnknownEntityError):
            rs.record("missing", "dev", 3)

    def test_value_validated_against_kind(self):
        rs = ResponseSet(tiny_index())
        with pytest.raises(AnswerValueError):
            rs.record("review-habit-1", "dev", 7)
        with pytest.raises(AnswerValueError):
            rs.record("site-access-1", "coach", 1)  # binary wants yes/no

    def test_answers_sorted(self):
        index = tiny_index()
        rs = ResponseSet(index)
        rs.record("review-habit-1", "z", 3)
        rs.record("review-habit-1", "a", 4)
        rs.record("shared-goals-1", "m", 2)
        keys = [(a.indicator_id, a.respondent_id) for a in rs.answers]
        assert keys == sorted(keys)


class TestPracticeReadiness:
    def test_printed_scenario_deficiencies(self):
        index = default_index()
        rs = ResponseSet(index)
        for value, char in [
            (4, "transparency-of-management"),
            (5, "small-power-distance"),
            (5, "developers-buy-in"),
            (3, "collaborative-management-style"),
            (1, "management-buy-in"),
        ]:
            for indicator in index.indicators_for(char):
                rs.record(indicator.id, "resp", value if indicator.answer_kind is AnswerKind.LIKERT5 else value == 5)
        readiness = practice_readiness("collaborative-planning", index, rs, Scope.ORGANIZATIONAL)
        assert not readiness.ready
        assert {s.characteristic.id for s in readiness.deficient} == {
            "collaborative-management-style",
            "management-buy-in",
        }
        assert [s.band.name for s in readiness.scores] == ["LA", "FA", "FA", "PA", "NA"]

    def test_all_fully_achieved_is_ready(self):
        index = tiny_index()
        rs = ResponseSet(index)
        rs.record("shared-goals-1", "m", 5)
        rs.record("shared-goals-2", "d", 100)
        readiness = practice_readiness("goal-alignment", index, rs, Scope.ORGANIZATIONAL)
        assert readiness.ready and readiness.deficient == ()

    def test_exactly_65_percent_is_ready(self):
        index = _scoring_index([("percent", 1)])
        rs = ResponseSet(index)
        rs.record("i0", "dev", 65)
        readiness = practice_readiness("a", index, rs, Scope.ORGANIZATIONAL)
        assert readiness.scores[0].percentage == 65
        assert readiness.ready

    def test_ready_iff_min_band_at_least_la(self):
        rng = random.Random(7)
        index = tiny_index()
        for _ in range(50):
            rs = ResponseSet(index)
            rs.record("shared-goals-1", "m", rng.randint(1, 5))
            rs.record("shared-goals-2", "d", rng.randint(0, 100))
            rs.record("review-habit-1", "d", rng.randint(1, 5))
            readiness = practice_readiness("peer-review", index, rs, Scope.ORGANIZATIONAL)
            min_band = min(s.band for s in readiness.scores)
            assert readiness.ready == (min_band >= AchievementBand.LA)

    def test_scope_selection(self):
        index = tiny_index()
        rs = ResponseSet(index)
        rs.record("site-access-1", "coach", True)
        project = practice_readiness("onsite-work", index, rs, Scope.PROJECT)
        organizational = practice_readiness("onsite-work", index, rs, Scope.ORGANIZATIONAL)
        assert [s.characteristic.id for s in project.scores] == ["site-access"]
        assert organizational.scores == ()  # vacuously ready
        assert organizational.ready


class TestFactorPresence:
    def test_fully_achieved_absent(self):
        index = default_index()
        rs = ResponseSet(index)
        for char in ("funds-allocated", "funds-spendable"):
            for indicator in index.indicators_for(char):
                rs.record(indicator.id, "m", True if indicator.answer_kind is AnswerKind.BINARY else 5)
        report = factor_presence("lack-of-sufficient-funds", index, rs)
        assert not report.present
        assert report.score == 100

    def test_unspendable_funds_forces_presence(self):
        index = default_index()
        rs = ResponseSet(index)
        for indicator in index.indicators_for("funds-allocated"):
            rs.record(indicator.id, "m", True if indicator.answer_kind is AnswerKind.BINARY else 5)
        rs.record("funds-spendable-1", "m", False)
        rs.record("funds-spendable-2", "m", False)
        report = factor_presence("lack-of-sufficient-funds", index, rs)
        spendable = next(s for s in report.scores if s.characteristic.id == "funds-spendable")
        assert spendable.band is AchievementBand.NA
        assert report.present

    def test_largely_achieved_absent_with_mean_score(self):
        index = _scoring_index([("likert5", 1)])
        rs = ResponseSet(index)
        rs.record("other", "dev", 4)  # 75% -> LA
        report = factor_presence("f", index, rs)
        assert not report.present
        assert report.score == 75


class TestMonotonicity:
    @given(st.data())
    @settings(max_examples=80, deadline=None)
    def test_raising_an_answer_never_hurts(self, data):
        index = tiny_index()
        rs = ResponseSet(index)
        values = {
            "shared-goals-1": data.draw(st.integers(1, 5)),
            "shared-goals-2": data.draw(st.integers(0, 100)),
            "review-habit-1": data.draw(st.integers(1, 5)),
            "site-access-1": data.draw(st.booleans()),
            "sponsor-support-1": data.draw(st.integers(1, 5)),
        }
        for indicator_id, value in values.items():
            rs.record(indicator_id, "r", value)

        target = data.draw(st.sampled_from(sorted(values)))
        kind = index.indicator(target).answer_kind
        raised = rs.copy()
        if kind is AnswerKind.LIKERT5:
            new_value = min(5, values[target] + 1)
        elif kind is AnswerKind.BINARY:
            new_value = True
        else:
            new_value = min(100, values[target] + 10)
        raised.record(target, "r", new_value)

        for characteristic in index.characteristics:
            before = score_characteristic(characteristic, index, rs)
            after = score_characteristic(characteristic, index, raised)
            assert after.percentage >= before.percentage
            assert after.band >= before.band
        for practice in index.practices:
            for scope in (Scope.ORGANIZATIONAL, Scope.PROJECT):
                before = practice_readiness(practice, index, rs, scope)
                after = practice_readiness(practice, index, raised, scope)
                assert not (before.ready and not after.ready)
        for factor in index.factors:
            before = factor_presence(factor, index, rs)
            after = factor_presence(factor, index, raised)
            assert not (not before.present and after.present)
