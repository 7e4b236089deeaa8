"""Answer recording and score aggregation.

Indicator answers normalize onto [0,1]; a characteristic's achievement is the
weight-averaged percentage over its answered indicators, mapped to the
NA/PA/LA/FA bands. Aggregation runs on exact fractions so band boundaries
(35/65/85) are hit exactly and raising any answer can never lower a score.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .errors import AnswerRoleError, AnswerValueError, OutOfRangeError, UnknownEntityError
from .index_model import (
    AnswerKind,
    Characteristic,
    DiscontinuingFactor,
    MeasurementIndex,
    Practice,
    Role,
    Scope,
)


class AchievementBand(enum.IntEnum):
    """Achievement bands in ascending order; int values give the total order."""

    NA = 0
    PA = 1
    LA = 2
    FA = 3


# Lower bounds of PA/LA/FA. The bands' printed ranges share endpoints; the
# shared endpoint belongs to the higher band (35 -> PA, 65 -> LA, 85 -> FA).
BAND_LOWER_BOUNDS: dict[AchievementBand, int] = {
    AchievementBand.PA: 35,
    AchievementBand.LA: 65,
    AchievementBand.FA: 85,
}

# Bands below this one mean the achievement is insufficient: a practice is
# ready only when every characteristic reaches it, and a discontinuing factor
# is present when any of its characteristics falls short of it.
SUFFICIENT_BAND = AchievementBand.LA


def band_of(percentage: float | int | Fraction) -> AchievementBand:
    """Map an achievement percentage in [0, 100] to its band."""
    if not 0 <= percentage <= 100:
        raise OutOfRangeError(f"percentage {percentage} outside [0, 100]")
    if percentage >= BAND_LOWER_BOUNDS[AchievementBand.FA]:
        return AchievementBand.FA
    if percentage >= BAND_LOWER_BOUNDS[AchievementBand.LA]:
        return AchievementBand.LA
    if percentage >= BAND_LOWER_BOUNDS[AchievementBand.PA]:
        return AchievementBand.PA
    return AchievementBand.NA


def validate_value(kind: AnswerKind, value: Any) -> None:
    """Raise AnswerValueError unless value fits the answer kind's range."""
    if kind is AnswerKind.LIKERT5:
        if isinstance(value, bool) or not isinstance(value, int) or not 1 <= value <= 5:
            raise AnswerValueError(f"likert5 value must be an integer 1..5, got {value!r}")
    elif kind is AnswerKind.BINARY:
        if not isinstance(value, bool):
            raise AnswerValueError(f"binary value must be yes/no, got {value!r}")
    elif kind is AnswerKind.PERCENT:
        if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= 100:
            raise AnswerValueError(f"percent value must be an integer 0..100, got {value!r}")
    else:  # pragma: no cover - enum is closed
        raise AnswerValueError(f"unknown answer kind {kind!r}")


def _normalized_fraction(kind: AnswerKind, value: Any) -> Fraction:
    validate_value(kind, value)
    if kind is AnswerKind.LIKERT5:
        return Fraction(value - 1, 4)
    if kind is AnswerKind.BINARY:
        return Fraction(1) if value else Fraction(0)
    return Fraction(value, 100)


@dataclass(frozen=True)
class Answer:
    indicator_id: str
    respondent_id: str
    role: Role
    value: int | bool
    recorded_at: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "indicator_id": self.indicator_id,
            "respondent_id": self.respondent_id,
            "role": self.role.value,
            "value": self.value,
            "recorded_at": self.recorded_at,
        }


def normalize_answer(answer: Answer, *, kind: AnswerKind | None = None,
                     index: MeasurementIndex | None = None) -> float:
    """Normalize a recorded answer onto [0, 1].

    The answer kind comes from `kind` or is looked up via `index`; one of the
    two must be given.
    """
    if kind is None:
        if index is None:
            raise ValueError("normalize_answer needs either kind= or index=")
        kind = index.indicator(answer.indicator_id).answer_kind
    return float(_normalized_fraction(kind, answer.value))


class ResponseSet:
    """Recorded answers for one index; one answer per (indicator, respondent)."""

    def __init__(self, index: MeasurementIndex) -> None:
        self.index = index
        self._answers: dict[tuple[str, str], Answer] = {}

    @property
    def index_ref(self) -> tuple[str, str]:
        return (self.index.name, self.index.version)

    def __len__(self) -> int:
        return len(self._answers)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResponseSet):
            return NotImplemented
        return self.index_ref == other.index_ref and self._answers == other._answers

    def record(
        self,
        indicator_id: str,
        respondent_id: str,
        value: Any,
        role: Role | str | None = None,
        recorded_at: str | None = None,
    ) -> str:
        """Record one answer; returns 'added', 'replaced' or 'unchanged'.

        Re-recording an identical (role, value) pair is a no-op that keeps the
        original timestamp, which makes imports idempotent.
        """
        indicator = self.index.indicator(indicator_id)
        if not respondent_id:
            raise AnswerValueError("respondent id must be non-empty")
        if role is None:
            role = indicator.respondent_role
        else:
            role = Role(role) if not isinstance(role, Role) else role
            if role is not indicator.respondent_role:
                raise AnswerRoleError(
                    f"indicator {indicator_id!r} is designated to "
                    f"{indicator.respondent_role.value}, not {role.value}"
                )
        validate_value(indicator.answer_kind, value)
        key = (indicator_id, respondent_id)
        existing = self._answers.get(key)
        if existing is not None and existing.role is role and existing.value == value:
            return "unchanged"
        self._answers[key] = Answer(indicator_id, respondent_id, role, value, recorded_at)
        return "replaced" if existing is not None else "added"

    def answers_for(self, indicator_id: str) -> tuple[Answer, ...]:
        return tuple(
            self._answers[key] for key in sorted(self._answers) if key[0] == indicator_id
        )

    def answered_indicator_ids(self) -> set[str]:
        return {indicator_id for indicator_id, _ in self._answers}

    @property
    def answers(self) -> tuple[Answer, ...]:
        return tuple(self._answers[key] for key in sorted(self._answers))

    def copy(self) -> "ResponseSet":
        clone = ResponseSet(self.index)
        clone._answers = dict(self._answers)
        return clone


@dataclass(frozen=True)
class CharacteristicScore:
    characteristic: Characteristic
    percentage: float
    band: AchievementBand
    answered: int
    expected: int
    provisional: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "characteristic_id": self.characteristic.id,
            "description": self.characteristic.description,
            "scope": self.characteristic.scope.value,
            "controllable": self.characteristic.controllable,
            "percentage": self.percentage,
            "band": self.band.name,
            "answered": self.answered,
            "expected": self.expected,
            "provisional": self.provisional,
        }


def asserted_score(characteristic: Characteristic, percentage: float) -> CharacteristicScore:
    """A score taken as given (what-if overrides) rather than computed from answers."""
    if not 0 <= percentage <= 100:
        raise OutOfRangeError(f"percentage {percentage} outside [0, 100]")
    return CharacteristicScore(
        characteristic=characteristic,
        percentage=float(percentage),
        band=band_of(percentage),
        answered=0,
        expected=0,
        provisional=False,
    )


def score_characteristic(
    characteristic: Characteristic | str,
    index: MeasurementIndex,
    responses: ResponseSet,
) -> CharacteristicScore:
    """Aggregate a characteristic's indicator answers into a banded percentage.

    Per indicator the score is the mean normalized answer over its respondents;
    the characteristic percentage is the weighted mean over answered indicators
    only. Unanswered designated indicators mark the score provisional; with no
    answers at all the score defaults conservatively to 0 / NA / provisional.
    """
    if isinstance(characteristic, str):
        characteristic = index.characteristic(characteristic)
    elif characteristic.id not in {c.id for c in index.characteristics}:
        raise UnknownEntityError("characteristic", characteristic.id)
    indicators = index.indicators_for(characteristic.id)

    weighted_sum = Fraction(0)
    weight_total = Fraction(0)
    answered = 0
    for indicator in indicators:
        answers = responses.answers_for(indicator.id)
        if not answers:
            continue
        answered += 1
        total = Fraction(0)
        for answer in answers:
            total += _normalized_fraction(indicator.answer_kind, answer.value)
        indicator_score = total / len(answers)
        weight = Fraction(str(indicator.weight))
        weighted_sum += weight * indicator_score
        weight_total += weight

    if answered == 0 or not indicators:
        return CharacteristicScore(
            characteristic=characteristic,
            percentage=0.0,
            band=AchievementBand.NA,
            answered=0,
            expected=len(indicators),
            provisional=True,
        )

    percentage = 100 * weighted_sum / weight_total
    return CharacteristicScore(
        characteristic=characteristic,
        percentage=float(percentage),
        band=band_of(percentage),
        answered=answered,
        expected=len(indicators),
        provisional=answered < len(indicators),
    )


@dataclass(frozen=True)
class PracticeReadiness:
    practice: Practice
    scope: Scope
    scores: tuple[CharacteristicScore, ...]

    @property
    def deficient(self) -> tuple[CharacteristicScore, ...]:
        return tuple(s for s in self.scores if s.band < SUFFICIENT_BAND)

    @property
    def ready(self) -> bool:
        return not self.deficient

    @property
    def provisional(self) -> bool:
        return any(s.provisional for s in self.scores)

    def to_dict(self) -> dict[str, Any]:
        p = self.practice
        return {
            "practice_id": p.id,
            "name": p.name,
            "level": p.level.rank,
            "level_name": p.level.name,
            "principle_id": p.principle.id,
            "principle_name": p.principle.name,
            "limiting": p.limiting,
            "scope": self.scope.value,
            "ready": self.ready,
            "scores": [s.to_dict() for s in self.scores],
            "deficient": [s.characteristic.id for s in self.deficient],
        }


def practice_readiness(
    practice: Practice | str,
    index: MeasurementIndex,
    responses: ResponseSet,
    scope: Scope,
) -> PracticeReadiness:
    """Readiness of one practice over its characteristics in the given scope.

    Stage 2 assesses project scope, stage 3 organizational scope; the caller
    picks. Ready means no in-scope characteristic sits in NA or PA.
    """
    if isinstance(practice, str):
        practice = index.practice(practice)
    elif practice.id not in {p.id for p in index.practices}:
        raise UnknownEntityError("practice", practice.id)
    scores = tuple(
        score_characteristic(c, index, responses)
        for c in practice.characteristics_in_scope(scope)
    )
    return PracticeReadiness(practice=practice, scope=scope, scores=scores)


@dataclass(frozen=True)
class FactorReport:
    factor: DiscontinuingFactor
    present: bool
    score: float
    scores: tuple[CharacteristicScore, ...]

    @property
    def provisional(self) -> bool:
        return any(s.provisional for s in self.scores)

    def to_dict(self) -> dict[str, Any]:
        return {
            "factor_id": self.factor.id,
            "name": self.factor.name,
            "present": self.present,
            "score": self.score,
            "characteristics": [s.to_dict() for s in self.scores],
        }


def factor_presence(
    factor: DiscontinuingFactor | str,
    index: MeasurementIndex,
    responses: ResponseSet,
) -> FactorReport:
    """Degree to which a discontinuing factor is present.

    Factor characteristics are phrased positively (e.g. availability of
    funds), so the factor is present when any of them falls below the
    sufficiency band. The factor score is the plain mean of its
    characteristics' percentages.
    """
    if isinstance(factor, str):
        factor = index.factor(factor)
    elif factor.id not in {f.id for f in index.factors}:
        raise UnknownEntityError("factor", factor.id)
    scores = tuple(score_characteristic(c, index, responses) for c in factor.characteristics)
    mean = sum(s.percentage for s in scores) / len(scores)
    present = any(s.band < SUFFICIENT_BAND for s in scores)
    return FactorReport(factor=factor, present=present, score=mean, scores=scores)


def missing_indicators(
    index: MeasurementIndex,
    responses: ResponseSet,
    characteristics: Iterable[Characteristic],
) -> list[str]:
    """Ids of designated indicators with no answer, for the given characteristics."""
    answered = responses.answered_indicator_ids()
    missing: list[str] = []
    seen: set[str] = set()
    for characteristic in characteristics:
        for indicator in index.indicators_for(characteristic.id):
            if indicator.id not in answered and indicator.id not in seen:
                seen.add(indicator.id)
                missing.append(indicator.id)
    return sorted(missing)
