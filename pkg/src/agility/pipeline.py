"""The staged assessment pipeline and its session state machine.

Stage 1 gates on discontinuing factors (go / no-go). Stage 2 walks the
limiting practices level by level to fix the project's target level T.
Stage 3 measures organizational readiness R over everything at or below T.
Stage 4 reconciles R against T into an adoption set and, when asked to
improve, a plan over the controllable deficiencies. All stage computations
are pure in (index, responses, policy); the session object owns state
transitions, invalidation and the audit trail.
"""

from __future__ import annotations

import enum
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Iterable, Mapping

from .errors import (
    PolicyConflictError,
    ProvisionalScoreError,
    SessionStateError,
    StageOrderError,
    UnknownEntityError,
    WhatIfError,
)
from .index_model import MeasurementIndex, Practice, Scope, practices_at_or_below
from .scoring import (
    AchievementBand,
    CharacteristicScore,
    FactorReport,
    PracticeReadiness,
    ResponseSet,
    SUFFICIENT_BAND,
    asserted_score,
    factor_presence,
    missing_indicators,
    score_characteristic,
)


class LevelPolicy(str, enum.Enum):
    """How a failing practice converts into a level ceiling.

    PAPER_LITERAL places the ceiling at the failing practice's own level (the
    failing practice itself is excluded from adoption); BELOW_FAILURE is the
    conservative alternative, one level under it.
    """

    PAPER_LITERAL = "paper_literal"
    BELOW_FAILURE = "below_failure"


class Decision(str, enum.Enum):
    GO = "go"
    NO_GO = "no_go"


class Scenario(str, enum.Enum):
    R_GT_T = "R_gt_T"
    R_EQ_T = "R_eq_T"
    R_LT_T = "R_lt_T"


class ReconciliationOption(str, enum.Enum):
    IMPROVE = "improve"
    RESTRICT = "restrict"


class SessionState(str, enum.Enum):
    DRAFT = "draft"
    STAGE1_DONE = "stage1_done"
    NO_GO = "no_go"
    STAGE2_DONE = "stage2_done"
    STAGE3_DONE = "stage3_done"
    STAGE4_DONE = "stage4_done"
    CLOSED = "closed"


def _ceiling(rank: int, policy: LevelPolicy) -> int:
    return rank if policy is LevelPolicy.PAPER_LITERAL else rank - 1


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# --- stage results -----------------------------------------------------------


@dataclass(frozen=True)
class Stage1Result:
    decision: Decision
    factors: tuple[FactorReport, ...]

    @property
    def blocking_factors(self) -> tuple[str, ...]:
        return tuple(r.factor.id for r in self.factors if r.present)

    def to_dict(self) -> dict[str, Any]:
        return {
            "decision": self.decision.value,
            "blocking_factors": list(self.blocking_factors),
            "factors": [r.to_dict() for r in self.factors],
        }

    @staticmethod
    def from_dict(doc: Mapping[str, Any], index: MeasurementIndex) -> "Stage1Result":
        factors = tuple(
            FactorReport(
                factor=index.factor(entry["factor_id"]),
                present=entry["present"],
                score=entry["score"],
                scores=tuple(
                    _score_from_dict(s, index) for s in entry["characteristics"]
                ),
            )
            for entry in doc["factors"]
        )
        return Stage1Result(decision=Decision(doc["decision"]), factors=factors)


@dataclass(frozen=True)
class Stage2Result:
    target_level: int
    policy: LevelPolicy
    trail: tuple[PracticeReadiness, ...]
    failing_practice_id: str | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "target_level": self.target_level,
            "policy": self.policy.value,
            "failing_practice": self.failing_practice_id,
            "trail": [entry.to_dict() for entry in self.trail],
        }

    @staticmethod
    def from_dict(doc: Mapping[str, Any], index: MeasurementIndex) -> "Stage2Result":
        return Stage2Result(
            target_level=doc["target_level"],
            policy=LevelPolicy(doc["policy"]),
            trail=tuple(_readiness_from_dict(entry, index) for entry in doc["trail"]),
            failing_practice_id=doc["failing_practice"],
        )

    def failed_practice_ids(self) -> tuple[str, ...]:
        return tuple(entry.practice.id for entry in self.trail if not entry.ready)


@dataclass(frozen=True)
class Deficiency:
    """One NA/PA characteristic with the practices it keeps from readiness."""

    score: CharacteristicScore
    practices: tuple[Practice, ...]

    @property
    def lowest_level(self) -> int:
        return min(p.level.rank for p in self.practices)

    @property
    def controllable(self) -> bool:
        return self.score.characteristic.controllable

    def to_dict(self) -> dict[str, Any]:
        return {
            "characteristic_id": self.score.characteristic.id,
            "description": self.score.characteristic.description,
            "percentage": self.score.percentage,
            "band": self.score.band.name,
            "controllable": self.controllable,
            "practices": [p.id for p in self.practices],
            "lowest_level": self.lowest_level,
        }

    @staticmethod
    def from_dict(doc: Mapping[str, Any], index: MeasurementIndex) -> "Deficiency":
        characteristic = index.characteristic(doc["characteristic_id"])
        return Deficiency(
            score=CharacteristicScore(
                characteristic=characteristic,
                percentage=doc["percentage"],
                band=AchievementBand[doc["band"]],
                answered=doc.get("answered", 0),
                expected=doc.get("expected", 0),
                provisional=False,
            ),
            practices=tuple(index.practice(pid) for pid in doc["practices"]),
        )


@dataclass(frozen=True)
class Stage3Result:
    target_level: int
    readiness_level: int
    extended: bool
    policy: LevelPolicy
    matrix: tuple[PracticeReadiness, ...]
    deficiencies: tuple[Deficiency, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "target_level": self.target_level,
            "readiness_level": self.readiness_level,
            "extended": self.extended,
            "policy": self.policy.value,
            "matrix": [entry.to_dict() for entry in self.matrix],
            "deficiencies": [d.to_dict() for d in self.deficiencies],
        }

    @staticmethod
    def from_dict(doc: Mapping[str, Any], index: MeasurementIndex) -> "Stage3Result":
        return Stage3Result(
            target_level=doc["target_level"],
            readiness_level=doc["readiness_level"],
            extended=doc["extended"],
            policy=LevelPolicy(doc["policy"]),
            matrix=tuple(_readiness_from_dict(entry, index) for entry in doc["matrix"]),
            deficiencies=tuple(Deficiency.from_dict(d, index) for d in doc["deficiencies"]),
        )


@dataclass(frozen=True)
class Stage4Result:
    scenario: Scenario
    option: ReconciliationOption
    final_level: int
    contingent: bool
    target_level: int
    readiness_level: int
    policy: LevelPolicy
    adoption: tuple[Practice, ...]
    excluded_stage2_failures: tuple[str, ...]
    excluded_not_ready: tuple[str, ...]
    improvement_plan: tuple[Deficiency, ...]
    lowered_from: int | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario.value,
            "option": self.option.value,
            "final_level": self.final_level,
            "contingent": self.contingent,
            "target_level": self.target_level,
            "readiness_level": self.readiness_level,
            "policy": self.policy.value,
            "adoption": [
                {
                    "practice_id": p.id,
                    "name": p.name,
                    "level": p.level.rank,
                    "principle_id": p.principle.id,
                }
                for p in self.adoption
            ],
            "excluded_stage2_failures": list(self.excluded_stage2_failures),
            "excluded_not_ready": list(self.excluded_not_ready),
            "improvement_plan": [d.to_dict() for d in self.improvement_plan],
            "lowered_from": self.lowered_from,
        }

    @staticmethod
    def from_dict(doc: Mapping[str, Any], index: MeasurementIndex) -> "Stage4Result":
        return Stage4Result(
            scenario=Scenario(doc["scenario"]),
            option=ReconciliationOption(doc["option"]),
            final_level=doc["final_level"],
            contingent=doc["contingent"],
            target_level=doc["target_level"],
            readiness_level=doc["readiness_level"],
            policy=LevelPolicy(doc["policy"]),
            adoption=tuple(index.practice(p["practice_id"]) for p in doc["adoption"]),
            excluded_stage2_failures=tuple(doc["excluded_stage2_failures"]),
            excluded_not_ready=tuple(doc["excluded_not_ready"]),
            improvement_plan=tuple(
                Deficiency.from_dict(d, index) for d in doc["improvement_plan"]
            ),
            lowered_from=doc["lowered_from"],
        )


def _score_from_dict(doc: Mapping[str, Any], index: MeasurementIndex) -> CharacteristicScore:
    return CharacteristicScore(
        characteristic=index.characteristic(doc["characteristic_id"]),
        percentage=doc["percentage"],
        band=AchievementBand[doc["band"]],
        answered=doc["answered"],
        expected=doc["expected"],
        provisional=doc["provisional"],
    )


def _readiness_from_dict(doc: Mapping[str, Any], index: MeasurementIndex) -> PracticeReadiness:
    return PracticeReadiness(
        practice=index.practice(doc["practice_id"]),
        scope=Scope(doc["scope"]),
        scores=tuple(_score_from_dict(s, index) for s in doc["scores"]),
    )


# --- pure stage computations -------------------------------------------------


def compute_stage1(index: MeasurementIndex, responses: ResponseSet) -> Stage1Result:
    """Evaluate every discontinuing factor; any present factor forces no-go."""
    factor_chars = [c for f in index.factors for c in f.characteristics]
    missing = missing_indicators(index, responses, factor_chars)
    if missing:
        raise ProvisionalScoreError(
            "discontinuing-factor indicators are unanswered; the gate cannot be decided",
            missing,
        )
    reports = tuple(factor_presence(f, index, responses) for f in index.factors)
    decision = Decision.NO_GO if any(r.present for r in reports) else Decision.GO
    return Stage1Result(decision=decision, factors=reports)


def compute_stage2(
    index: MeasurementIndex, responses: ResponseSet, policy: LevelPolicy
) -> Stage2Result:
    """Walk limiting practices upward; the first failing level caps the target.

    All limiting practices of the failing level are evaluated and reported
    before stopping; nothing above it is touched. With no failures the target
    is the scale's top level.
    """
    limiting = index.limiting_practices()
    trail: list[PracticeReadiness] = []
    for rank in sorted({p.level.rank for p in limiting}):
        level_entries = [
            practice_readiness_cached(p, index, responses, Scope.PROJECT)
            for p in limiting
            if p.level.rank == rank
        ]
        missing = missing_indicators(
            index,
            responses,
            [c for p in limiting if p.level.rank == rank
             for c in p.characteristics_in_scope(Scope.PROJECT)],
        )
        if missing:
            raise ProvisionalScoreError(
                f"project indicators for limiting practices at level {rank} are unanswered",
                missing,
            )
        trail.extend(level_entries)
        failed = [entry for entry in level_entries if not entry.ready]
        if failed:
            return Stage2Result(
                target_level=_ceiling(rank, policy),
                policy=policy,
                trail=tuple(trail),
                failing_practice_id=failed[0].practice.id,
            )
    return Stage2Result(
        target_level=index.max_rank,
        policy=policy,
        trail=tuple(trail),
        failing_practice_id=None,
    )


def practice_readiness_cached(
    practice: Practice,
    index: MeasurementIndex,
    responses: ResponseSet,
    scope: Scope,
    score_cache: dict[str, CharacteristicScore] | None = None,
) -> PracticeReadiness:
    """practice_readiness with an optional per-run characteristic score cache."""
    scores = []
    for c in practice.characteristics_in_scope(scope):
        if score_cache is not None and c.id in score_cache:
            scores.append(score_cache[c.id])
            continue
        score = score_characteristic(c, index, responses)
        if score_cache is not None:
            score_cache[c.id] = score
        scores.append(score)
    return PracticeReadiness(practice=practice, scope=scope, scores=tuple(scores))


def compute_stage3(
    index: MeasurementIndex,
    responses: ResponseSet,
    target_level: int,
    policy: LevelPolicy,
    extended: bool = False,
    overrides: Mapping[str, float] | None = None,
) -> Stage3Result:
    """Organizational readiness over practices at or below the target level.

    `extended` widens the matrix to the whole scale so R may exceed T (the
    only way an R > T scenario can be observed). `overrides` substitutes
    asserted percentages for computed scores, for what-if projections.
    """
    ceiling_rank = index.max_rank if extended else target_level
    selected = practices_at_or_below(index, ceiling_rank) if ceiling_rank >= 1 else []

    score_cache: dict[str, CharacteristicScore] = {}
    if overrides:
        for cid, pct in overrides.items():
            score_cache[cid] = asserted_score(index.characteristic(cid), pct)

    unanswered_chars = [
        c
        for p in selected
        for c in p.characteristics_in_scope(Scope.ORGANIZATIONAL)
        if c.id not in score_cache
    ]
    missing = missing_indicators(index, responses, unanswered_chars)
    if missing:
        raise ProvisionalScoreError(
            "organizational indicators below the target level are unanswered",
            missing,
        )

    matrix = tuple(
        practice_readiness_cached(p, index, responses, Scope.ORGANIZATIONAL, score_cache)
        for p in selected
    )

    not_ready = [entry for entry in matrix if not entry.ready]
    if not_ready:
        lowest = min(entry.practice.level.rank for entry in not_ready)
        readiness_level = _ceiling(lowest, policy)
    else:
        readiness_level = index.max_rank if extended else target_level

    by_char: dict[str, list[Practice]] = {}
    score_by_char: dict[str, CharacteristicScore] = {}
    for entry in matrix:
        for score in entry.scores:
            if score.band < SUFFICIENT_BAND:
                by_char.setdefault(score.characteristic.id, []).append(entry.practice)
                score_by_char[score.characteristic.id] = score
    deficiencies = tuple(
        sorted(
            (
                Deficiency(score=score_by_char[cid], practices=tuple(owners))
                for cid, owners in by_char.items()
            ),
            key=lambda d: (d.lowest_level, d.score.characteristic.id),
        )
    )
    return Stage3Result(
        target_level=target_level,
        readiness_level=readiness_level,
        extended=extended,
        policy=policy,
        matrix=matrix,
        deficiencies=deficiencies,
    )


def compute_stage4(
    index: MeasurementIndex,
    stage2: Stage2Result,
    stage3: Stage3Result,
    option: ReconciliationOption,
    policy: LevelPolicy,
) -> Stage4Result:
    """Reconcile readiness R against target T into the set of practices to adopt."""
    target = stage3.target_level
    readiness = stage3.readiness_level
    stage2_failures = set(stage2.failed_practice_ids())

    if readiness > target:
        scenario = Scenario.R_GT_T
    elif readiness == target:
        scenario = Scenario.R_EQ_T
    else:
        scenario = Scenario.R_LT_T

    ready_by_id = {entry.practice.id: entry.ready for entry in stage3.matrix}

    def adoptable(cap: int) -> list[Practice]:
        if cap < 1:
            return []
        return [p for p in practices_at_or_below(index, cap) if p.id not in stage2_failures]

    excluded_not_ready: list[str] = []
    improvement_plan: tuple[Deficiency, ...] = ()
    lowered_from: int | None = None
    contingent = False

    if scenario is not Scenario.R_LT_T:
        final_level = target
        adoption = adoptable(final_level)
    elif option is ReconciliationOption.RESTRICT:
        final_level = readiness
        adoption = [p for p in adoptable(final_level) if ready_by_id.get(p.id, False)]
        excluded_not_ready = [
            p.id for p in adoptable(final_level) if not ready_by_id.get(p.id, False)
        ]
    else:
        improvement_plan = tuple(
            d for d in stage3.deficiencies if d.controllable and d.lowest_level <= target
        )
        uncontrollable = [d for d in stage3.deficiencies if not d.controllable]
        final_level = target
        if uncontrollable:
            final_level = min(
                [target] + [_ceiling(d.lowest_level, policy) for d in uncontrollable]
            )
            lowered_from = target if final_level < target else None
        blocked = {
            p.id
            for d in uncontrollable
            for p in d.practices
        }
        adoption = [p for p in adoptable(final_level) if p.id not in blocked]
        excluded_not_ready = sorted(
            p.id for p in adoptable(final_level) if p.id in blocked
        )
        contingent = any(not ready_by_id.get(p.id, True) for p in adoption)

    return Stage4Result(
        scenario=scenario,
        option=option,
        final_level=final_level,
        contingent=contingent,
        target_level=target,
        readiness_level=readiness,
        policy=policy,
        adoption=tuple(adoption),
        excluded_stage2_failures=tuple(sorted(stage2_failures)),
        excluded_not_ready=tuple(sorted(excluded_not_ready)),
        improvement_plan=improvement_plan,
        lowered_from=lowered_from,
    )


# --- the session state machine -----------------------------------------------

_RUN_PRECONDITION: dict[int, SessionState] = {
    1: SessionState.DRAFT,
    2: SessionState.STAGE1_DONE,
    3: SessionState.STAGE2_DONE,
    4: SessionState.STAGE3_DONE,
}

_DONE_STATE: dict[int, SessionState] = {
    1: SessionState.STAGE1_DONE,
    2: SessionState.STAGE2_DONE,
    3: SessionState.STAGE3_DONE,
    4: SessionState.STAGE4_DONE,
}


class AssessmentSession:
    """One assessment: an index pin, recorded answers, stage results, audit log.

    Single-writer by design; persistence enforces that with an advisory file
    lock. Stage results become stale only through explicit invalidation
    (rerun or changed answers), never silently.
    """

    def __init__(
        self,
        index: MeasurementIndex,
        index_ref: Mapping[str, Any] | None = None,
        policy: LevelPolicy = LevelPolicy.PAPER_LITERAL,
        session_id: str | None = None,
    ) -> None:
        self.id = session_id or uuid.uuid4().hex
        self.index = index
        self.index_ref: dict[str, Any] = dict(index_ref or {})
        self.index_ref.setdefault("name", index.name)
        self.index_ref.setdefault("version", index.version)
        self.policy = policy
        self.state = SessionState.DRAFT
        self.responses = ResponseSet(index)
        self.results: dict[int, Any] = {}
        self.audit: list[dict[str, Any]] = []
        self._log("created", {"index": f"{index.name}@{index.version}"})

    # -- plumbing --

    def _log(self, event: str, details: Mapping[str, Any] | None = None) -> None:
        self.audit.append({"at": _utcnow(), "event": event, "details": dict(details or {})})

    def stage_completed_at(self, stage: int) -> str | None:
        for entry in reversed(self.audit):
            if entry["event"] == "stage_completed" and entry["details"].get("stage") == stage:
                return entry["at"]
        return None

    def result(self, stage: int) -> Any:
        res = self.results.get(stage)
        if res is None:
            raise StageOrderError(
                f"stage {stage} has no result in state {self.state.value}",
                details={"state": self.state.value, "stage": stage},
            )
        return res

    def _require_state(self, stage: int) -> None:
        expected = _RUN_PRECONDITION[stage]
        if self.state is not expected:
            raise StageOrderError(
                f"stage {stage} requires state {expected.value}, session is {self.state.value}",
                details={"state": self.state.value, "stage": stage},
            )

    def _state_from_results(self) -> SessionState:
        if 4 in self.results:
            return SessionState.STAGE4_DONE
        if 3 in self.results:
            return SessionState.STAGE3_DONE
        if 2 in self.results:
            return SessionState.STAGE2_DONE
        if 1 in self.results:
            stage1: Stage1Result = self.results[1]
            return (
                SessionState.NO_GO
                if stage1.decision is Decision.NO_GO
                else SessionState.STAGE1_DONE
            )
        return SessionState.DRAFT

    def invalidate_results_from(self, stage: int, reason: str) -> list[int]:
        """Drop results of stage and above; state falls back to match."""
        dropped_stages = [k for k in range(stage, 5) if k in self.results]
        for k in dropped_stages:
            del self.results[k]
        if dropped_stages:
            self.state = self._state_from_results()
            self._log("results_invalidated", {"stages": dropped_stages, "reason": reason})
        return dropped_stages

    # -- answers --

    def apply_answers(self, rows: Iterable[Mapping[str, Any]]) -> dict[str, Any]:
        """Record parsed answer rows; returns the import report.

        Rows that fail validation are rejected individually with a reason.
        Changed answers invalidate every stage result whose inputs include
        the changed indicator, plus everything downstream of it.
        """
        if self.state is SessionState.CLOSED:
            raise SessionStateError("session is closed; answers can no longer change")
        accepted = replaced = 0
        rejected: list[dict[str, Any]] = []
        changed: set[str] = set()
        for row in rows:
            row_ref = row.get("row")
            try:
                status = self.responses.record(
                    row["indicator_id"],
                    row["respondent_id"],
                    row["value"],
                    role=row.get("role"),
                    recorded_at=row.get("recorded_at"),
                )
            except Exception as exc:  # engine validation errors become row rejections
                code = getattr(exc, "code", "invalid")
                rejected.append({
                    "row": row_ref,
                    "indicator_id": row.get("indicator_id"),
                    "respondent_id": row.get("respondent_id"),
                    "code": code,
                    "reason": str(exc),
                })
                continue
            if status == "added":
                accepted += 1
                changed.add(row["indicator_id"])
            elif status == "replaced":
                replaced += 1
                changed.add(row["indicator_id"])
            else:
                replaced += 1  # identical duplicate: last one wins, nothing changed

        invalidated: list[int] = []
        if changed:
            lowest = min(self._stages_for_indicator(iid) for iid in changed)
            invalidated = self.invalidate_results_from(lowest, reason="answers_changed")
        self._log(
            "responses_imported",
            {
                "accepted": accepted,
                "replaced": replaced,
                "rejected": len(rejected),
                "invalidated_stages": invalidated,
            },
        )
        return {
            "accepted": accepted,
            "replaced": replaced,
            "rejected": rejected,
            "invalidated_stages": invalidated,
        }

    def _stages_for_indicator(self, indicator_id: str) -> int:
        """Lowest stage whose inputs include this indicator (4 = none)."""
        stages = indicator_stages(self.index, indicator_id)
        return min(stages) if stages else 4

    # -- stage runs --

    def run_stage1(self) -> Stage1Result:
        self._require_state(1)
        result = compute_stage1(self.index, self.responses)
        self.results[1] = result
        self.state = (
            SessionState.NO_GO if result.decision is Decision.NO_GO else SessionState.STAGE1_DONE
        )
        self._log("stage_completed", {"stage": 1, "decision": result.decision.value})
        return result

    def run_stage2(self) -> Stage2Result:
        self._require_state(2)
        result = compute_stage2(self.index, self.responses, self.policy)
        self.results[2] = result
        self.state = SessionState.STAGE2_DONE
        self._log("stage_completed", {"stage": 2, "target_level": result.target_level})
        return result

    def run_stage3(self, extend_above_target: bool = False) -> Stage3Result:
        self._require_state(3)
        stage2: Stage2Result = self.results[2]
        result = compute_stage3(
            self.index,
            self.responses,
            stage2.target_level,
            self.policy,
            extended=extend_above_target,
        )
        self.results[3] = result
        self.state = SessionState.STAGE3_DONE
        self._log("stage_completed", {"stage": 3, "readiness_level": result.readiness_level})
        return result

    def run_stage4(self, option: ReconciliationOption | str) -> Stage4Result:
        self._require_state(4)
        option = ReconciliationOption(option)
        result = compute_stage4(
            self.index, self.results[2], self.results[3], option, self.policy
        )
        self.results[4] = result
        self.state = SessionState.STAGE4_DONE
        self._log(
            "stage_completed",
            {"stage": 4, "scenario": result.scenario.value, "final_level": result.final_level},
        )
        return result

    def rerun_stage(self, stage: int, **kwargs: Any) -> Any:
        """Recompute a completed stage, explicitly invalidating later results."""
        if stage not in self.results:
            raise StageOrderError(
                f"stage {stage} was never run; nothing to rerun",
                details={"state": self.state.value, "stage": stage},
            )
        self.invalidate_results_from(stage, reason="rerun")
        return self._dispatch(stage, **kwargs)

    def _dispatch(self, stage: int, **kwargs: Any) -> Any:
        if stage == 1:
            return self.run_stage1()
        if stage == 2:
            return self.run_stage2()
        if stage == 3:
            return self.run_stage3(**kwargs)
        if stage == 4:
            return self.run_stage4(**kwargs)
        raise StageOrderError(f"no such stage: {stage}")

    def run_or_rerun(
        self,
        stage: int,
        option: ReconciliationOption | str | None = None,
        policy: LevelPolicy | str | None = None,
        extend_above_target: bool = False,
    ) -> Any:
        """Run stage k, treating a repeat run as an explicit rerun.

        A policy change is only accepted while no level results depend on the
        old policy (i.e. after stage >= 2 results are invalidated by the rerun
        itself, or before they exist).
        """
        if self.state is SessionState.CLOSED:
            raise SessionStateError("session is closed")
        if stage not in (1, 2, 3, 4):
            raise StageOrderError(f"no such stage: {stage}")
        if stage in self.results:
            self.invalidate_results_from(stage, reason="rerun")
        if policy is not None:
            policy = LevelPolicy(policy)
            if policy is not self.policy:
                if any(k in self.results for k in (2, 3, 4)):
                    raise PolicyConflictError(
                        "cannot change level policy while stage 2+ results stand; rerun stage 2",
                        details={"policy": self.policy.value},
                    )
                self.policy = policy
                self._log("policy_changed", {"policy": policy.value})
        kwargs: dict[str, Any] = {}
        if stage == 3:
            kwargs["extend_above_target"] = extend_above_target
        if stage == 4:
            if option is None:
                raise StageOrderError("stage 4 requires a reconciliation option")
            kwargs["option"] = option
        return self._dispatch(stage, **kwargs)

    # -- what-if --

    def what_if(
        self,
        overrides: Mapping[str, float],
        option: ReconciliationOption | str | None = None,
    ) -> tuple[Stage3Result, Stage4Result]:
        """Recompute stages 3 and 4 with asserted percentages; never mutates.

        Only controllable characteristics may be overridden. The
        reconciliation option defaults to the stored stage 4 option when one
        exists, else to improve.
        """
        if 3 not in self.results:
            raise StageOrderError(
                "what-if needs a completed stage 3",
                details={"state": self.state.value, "stage": 3},
            )
        for cid in overrides:
            characteristic = self.index.characteristic(cid)
            if not characteristic.controllable:
                raise WhatIfError(
                    f"characteristic {cid!r} is outside the organization's control",
                    details={"characteristic_id": cid},
                )
        stage2: Stage2Result = self.results[2]
        stage3: Stage3Result = self.results[3]
        if option is None:
            stored: Stage4Result | None = self.results.get(4)
            option = stored.option if stored else ReconciliationOption.IMPROVE
        option = ReconciliationOption(option)
        projected3 = compute_stage3(
            self.index,
            self.responses,
            stage2.target_level,
            self.policy,
            extended=stage3.extended,
            overrides=overrides,
        )
        projected4 = compute_stage4(self.index, stage2, projected3, option, self.policy)
        return projected3, projected4

    # -- lifecycle --

    def close(self) -> None:
        if self.state not in (SessionState.STAGE4_DONE, SessionState.NO_GO):
            raise StageOrderError(
                f"session can only close after reconciliation or on no-go, not from {self.state.value}",
                details={"state": self.state.value},
            )
        self.state = SessionState.CLOSED
        self._log("closed")

    # -- consistency & serialization --

    def validate(self) -> list[str]:
        """Internal consistency problems (empty list when the session is sound)."""
        problems: list[str] = []
        stage1: Stage1Result | None = self.results.get(1)
        if self.state is SessionState.NO_GO:
            if stage1 is None or stage1.decision is not Decision.NO_GO:
                problems.append("no_go state requires a no-go stage 1 result")
            if any(k in self.results for k in (2, 3, 4)):
                problems.append("no_go session must not hold stage 2-4 results")
        required = {
            SessionState.DRAFT: 0,
            SessionState.STAGE1_DONE: 1,
            SessionState.STAGE2_DONE: 2,
            SessionState.STAGE3_DONE: 3,
            SessionState.STAGE4_DONE: 4,
        }
        if self.state in required:
            depth = required[self.state]
            for k in range(1, depth + 1):
                if k not in self.results:
                    problems.append(f"state {self.state.value} requires a stage {k} result")
            for k in range(depth + 1, 5):
                if k in self.results:
                    problems.append(f"state {self.state.value} must not hold a stage {k} result")
            if depth >= 1 and stage1 is not None and stage1.decision is Decision.NO_GO:
                problems.append("go states require a go decision in stage 1")
        if 2 in self.results and 3 in self.results:
            if self.results[3].target_level != self.results[2].target_level:
                problems.append("stage 3 target level differs from stage 2")
        if 3 in self.results and 4 in self.results:
            s3, s4 = self.results[3], self.results[4]
            if (s4.target_level, s4.readiness_level) != (s3.target_level, s3.readiness_level):
                problems.append("stage 4 levels differ from stage 3")
        return problems

    def to_doc(self) -> dict[str, Any]:
        results_doc = {
            f"stage{k}": (self.results[k].to_dict() if k in self.results else None)
            for k in (1, 2, 3, 4)
        }
        return {
            "id": self.id,
            "state": self.state.value,
            "policy": self.policy.value,
            "index": dict(self.index_ref),
            "responses": [a.to_dict() for a in self.responses.answers],
            "results": results_doc,
            "audit": self.audit,
        }

    @staticmethod
    def from_doc(doc: Mapping[str, Any], index: MeasurementIndex) -> "AssessmentSession":
        session = AssessmentSession(
            index,
            index_ref=doc["index"],
            policy=LevelPolicy(doc["policy"]),
            session_id=doc["id"],
        )
        session.audit = [dict(entry) for entry in doc["audit"]]
        for answer in doc["responses"]:
            session.responses.record(
                answer["indicator_id"],
                answer["respondent_id"],
                answer["value"],
                role=answer["role"],
                recorded_at=answer["recorded_at"],
            )
        loaders = {
            1: Stage1Result.from_dict,
            2: Stage2Result.from_dict,
            3: Stage3Result.from_dict,
            4: Stage4Result.from_dict,
        }
        for k, loader in loaders.items():
            entry = doc["results"].get(f"stage{k}")
            if entry is not None:
                session.results[k] = loader(entry, index)
        session.state = SessionState(doc["state"])
        return session


def indicator_stages(index: MeasurementIndex, indicator_id: str) -> tuple[int, ...]:
    """The stages whose inputs include this indicator (structurally).

    Factor indicators feed stage 1; project-scope indicators of limiting
    practices feed stage 2; organizational indicators of any practice feed
    stage 3 (subject to the target level at run time).
    """
    characteristic = index.indicator(indicator_id).characteristic
    stages: list[int] = []
    if any(characteristic.id in {c.id for c in f.characteristics} for f in index.factors):
        stages.append(1)
    owners = index.practices_owning(characteristic.id)
    if characteristic.scope is Scope.PROJECT and any(p.limiting for p in owners):
        stages.append(2)
    if characteristic.scope is Scope.ORGANIZATIONAL and owners:
        stages.append(3)
    return tuple(stages)


# Spec-shaped conveniences: the stage operations as module-level functions.

def run_stage1(session: AssessmentSession) -> Stage1Result:
    return session.run_stage1()


def run_stage2(session: AssessmentSession) -> Stage2Result:
    return session.run_stage2()


def run_stage3(session: AssessmentSession, extend_above_target: bool = False) -> Stage3Result:
    return session.run_stage3(extend_above_target)


def run_stage4(session: AssessmentSession, option: ReconciliationOption | str) -> Stage4Result:
    return session.run_stage4(option)


def what_if(
    session: AssessmentSession,
    overrides: Mapping[str, float],
    option: ReconciliationOption | str | None = None,
) -> tuple[Stage3Result, Stage4Result]:
    return session.what_if(overrides, option)


def rerun_stage(session: AssessmentSession, stage: int, **kwargs: Any) -> Any:
    return session.rerun_stage(stage, **kwargs)
